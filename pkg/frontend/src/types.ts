// Documents served by the grounding HTTP API, verbatim.

export interface SceneEntry {
  scene_id: string;
  regions: string[];
}

export interface BoxDoc {
  center: [number, number, number];
  size: [number, number, number];
  yaw: number;
}

export interface GraphNodeDoc {
  id: string;
  kind: "object" | "space";
  label: string;
  class_nyu40: string;
  colors: string[];
  size_label: string | null;
  box: BoxDoc;
}

export interface GraphEdgeDoc {
  type: string;
  target: string;
  anchors: string[];
}

export interface GraphDoc {
  region_id: string;
  nodes: GraphNodeDoc[];
  edges: GraphEdgeDoc[];
}

export interface AlternativeDoc {
  statement: string;
  object_id: string;
  score: number;
  query: unknown;
}

interface GroundBase {
  query: unknown;
  confidence: string;
  diagnostics: string[];
}

export interface GroundHit extends GroundBase {
  exists: true;
  object_id: string;
  bindings: Record<string, string>;
}

export interface GroundMiss extends GroundBase {
  exists: false;
  alternatives: AlternativeDoc[];
}

export type GroundResponse = GroundHit | GroundMiss;

export interface ParseFailureDetail {
  error: "parse";
  message: string;
  diagnostics: string[];
}
