// Top-down SVG render of one region: object footprints colored by
// class, free spaces drawn as dashed outlines, one highlight at a time.

import type { BoxDoc, GraphDoc, GraphNodeDoc } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";
const PAD = 0.6;

/** Stable hue per class name so repeated renders agree. */
export function classColor(name: string): string {
  let h = 0;
  for (const ch of name) h = (h * 31 + ch.codePointAt(0)!) >>> 0;
  return `hsl(${(h * 137.508) % 360}, 55%, 52%)`;
}

/** Yawed box corners in world xy, counterclockwise. */
export function footprintCorners(box: BoxDoc): [number, number][] {
  const [cx, cy] = box.center;
  const hx = box.size[0] / 2;
  const hy = box.size[1] / 2;
  const c = Math.cos(box.yaw);
  const s = Math.sin(box.yaw);
  const local: [number, number][] = [
    [-hx, -hy],
    [hx, -hy],
    [hx, hy],
    [-hx, hy],
  ];
  return local.map(([x, y]) => [cx + c * x - s * y, cy + s * x + c * y]);
}

export class RegionMap {
  readonly svg: SVGSVGElement;

  constructor(container: HTMLElement) {
    this.svg = document.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("class", "region-map");
    this.svg.setAttribute("preserveAspectRatio", "xMidYMid meet");
    container.appendChild(this.svg);
  }

  render(graph: GraphDoc): void {
    this.svg.replaceChildren();
    const corners = graph.nodes.flatMap((n) => footprintCorners(n.box));
    if (corners.length === 0) return;
    const xs = corners.map((p) => p[0]);
    const ys = corners.map((p) => p[1]);
    const minX = Math.min(...xs) - PAD;
    const maxX = Math.max(...xs) + PAD;
    const minY = Math.min(...ys) - PAD;
    const maxY = Math.max(...ys) + PAD;
    // world y grows up, svg y grows down: draw at -y
    this.svg.setAttribute("viewBox", `${minX} ${-maxY} ${maxX - minX} ${maxY - minY}`);
    const fontSize = Math.max(maxX - minX, maxY - minY) * 0.035;

    const spaces = graph.nodes.filter((n) => n.kind === "space");
    const objects = graph.nodes.filter((n) => n.kind !== "space");
    for (const node of [...spaces, ...objects]) {
      this.svg.appendChild(this.footprint(node));
      this.svg.appendChild(this.caption(node, fontSize));
    }
  }

  private footprint(node: GraphNodeDoc): SVGPolygonElement {
    const poly = document.createElementNS(SVG_NS, "polygon");
    poly.setAttribute("points", footprintCorners(node.box).map(([x, y]) => `${x},${-y}`).join(" "));
    poly.dataset.objectId = node.id;
    if (node.kind === "space") {
      poly.setAttribute("class", "footprint space");
    } else {
      poly.setAttribute("class", "footprint object");
      poly.setAttribute("fill", classColor(node.class_nyu40));
    }
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${node.id} (${node.label})`;
    poly.appendChild(title);
    return poly;
  }

  private caption(node: GraphNodeDoc, fontSize: number): SVGTextElement {
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(node.box.center[0]));
    text.setAttribute("y", String(-node.box.center[1]));
    text.setAttribute("class", node.kind === "space" ? "caption space" : "caption");
    text.setAttribute("font-size", String(fontSize));
    text.textContent = node.label;
    return text;
  }

  /** Mark one object as the grounded referent; null clears. */
  highlight(objectId: string | null): void {
    for (const poly of this.svg.querySelectorAll("polygon.footprint")) {
      poly.classList.toggle("highlight", poly.getAttribute("data-object-id") === objectId);
    }
  }
}
