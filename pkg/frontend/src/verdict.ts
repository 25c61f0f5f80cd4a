// Verdict panel: grounded object, or a not-found notice with ranked
// alternatives.  Scores are printed exactly as the service sent them.

import type { AlternativeDoc, GroundResponse, ParseFailureDetail } from "./types";

export function renderVerdict(
  panel: HTMLElement,
  statement: string,
  verdict: GroundResponse,
  onAccept: (alt: AlternativeDoc) => void,
): void {
  panel.replaceChildren();
  const quoted = document.createElement("p");
  quoted.className = "submitted";
  quoted.textContent = `"${statement}"`;
  panel.appendChild(quoted);

  if (verdict.exists) {
    const ok = document.createElement("p");
    ok.className = "verdict-ok";
    ok.innerHTML = `found: <code class="grounded-id"></code>`;
    ok.querySelector("code")!.textContent = verdict.object_id;
    panel.appendChild(ok);
    return;
  }

  const miss = document.createElement("p");
  miss.className = "verdict-miss";
  miss.textContent = "No such object in this region. Closest alternatives:";
  panel.appendChild(miss);

  const list = document.createElement("ol");
  list.className = "alternatives";
  for (const alt of verdict.alternatives) {
    const item = document.createElement("li");
    item.dataset.objectId = alt.object_id;

    const score = document.createElement("span");
    score.className = "alt-score";
    // verbatim from the response, no reformatting
    score.textContent = String(alt.score);
    score.dataset.score = String(alt.score);

    const text = document.createElement("span");
    text.className = "alt-statement";
    text.textContent = alt.statement;

    const accept = document.createElement("button");
    accept.type = "button";
    accept.className = "accept";
    accept.textContent = "ground this";
    accept.addEventListener("click", () => onAccept(alt));

    item.append(score, text, accept);
    list.appendChild(item);
  }
  panel.appendChild(list);
}

export function renderParseFailure(panel: HTMLElement, statement: string, detail: ParseFailureDetail): void {
  panel.replaceChildren();
  const quoted = document.createElement("p");
  quoted.className = "submitted";
  quoted.textContent = `"${statement}"`;

  const msg = document.createElement("p");
  msg.className = "verdict-parse-error";
  msg.textContent = `could not parse: ${detail.message}`;

  panel.append(quoted, msg);
  if (detail.diagnostics.length > 0) {
    const diag = document.createElement("p");
    diag.className = "parse-diagnostics";
    diag.textContent = `unmatched tokens: ${detail.diagnostics.join(", ")}`;
    panel.appendChild(diag);
  }
}
