/** DOM builders for the tree browser, the concept panel and the review queue. */

import type { ConceptCard, ConceptDetail, QueueItem, TreeNode } from "./api.js";
import type { LogEntry, QueueState, TreeState } from "./state.js";
import { isExpanded } from "./state.js";

const MATCH_TYPES = ["exactMatch", "closeMatch", "broadMatch", "narrowMatch", "relatedMatch"];

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    if (key === "class") node.className = value;
    else node.setAttribute(key, value);
  }
  node.append(...children);
  return node;
}

export interface TreeCallbacks {
  onToggle(node: TreeNode): void;
  onSelect(node: TreeNode): void;
}

export function renderTree(state: TreeState, callbacks: TreeCallbacks): HTMLElement {
  const container = el("div", { class: "tree" });
  if (state.roots.length === 0) {
    container.append(el("p", { class: "empty" }, "Ce thésaurus est vide."));
    return container;
  }
  container.append(renderNodes(state.roots, state, callbacks));
  return container;
}

function renderNodes(nodes: TreeNode[], state: TreeState, callbacks: TreeCallbacks): HTMLElement {
  const list = el("ul", { class: "tree-level" });
  for (const node of nodes) {
    const item = el("li", {});
    const row = el("div", { class: "tree-row" + (state.selected === node.ark ? " selected" : "") });
    const expandable = node.narrower_count > 0;
    const toggle = el(
      "button",
      { class: "toggle", "data-ark": node.ark },
      expandable ? (isExpanded(state, node.ark) ? "−" : "+") : "·",
    );
    toggle.disabled = !expandable;
    toggle.addEventListener("click", () => callbacks.onToggle(node));
    const label = el("button", { class: "label", "data-ark": node.ark }, node.label);
    label.addEventListener("click", () => callbacks.onSelect(node));
    row.append(toggle, label, el("span", { class: "count" }, expandable ? `(${node.narrower_count})` : ""));
    item.append(row);
    if (expandable && isExpanded(state, node.ark) && node.children) {
      item.append(renderNodes(node.children, state, callbacks));
    }
    list.append(item);
  }
  return list;
}

export function renderConceptPanel(detail: ConceptDetail, paths: string[]): HTMLElement {
  const panel = el("div", { class: "concept-panel" });
  const prefs = Object.entries(detail.pref_labels).map(([lang, text]) => `${text} (${lang})`);
  panel.append(el("h2", {}, prefs.join(" / ") || detail.ark));
  panel.append(el("p", { class: "ark" }, detail.ark));
  if (detail.alt_labels.length > 0) {
    panel.append(
      el("p", { class: "alts" }, "Synonymes : " + detail.alt_labels.map((l) => l.text).join(" ; ")),
    );
  }
  if (detail.definition) {
    const def = el("div", { class: "definition" });
    def.append(el("h3", {}, "Définition"), el("p", {}, detail.definition.text));
    if (detail.definition.sources.length > 0) {
      def.append(el("p", { class: "sources" }, "Sources : " + detail.definition.sources.join(" ; ")));
    }
    for (const url of detail.definition.external_resources) {
      def.append(el("p", { class: "resource" }, el("a", { href: url, target: "_blank" }, url)));
    }
    panel.append(def);
  } else {
    panel.append(el("p", { class: "empty" }, "Pas de définition."));
  }
  if (detail.related.length > 0) {
    const related = el("ul", { class: "related" });
    for (const r of detail.related) related.append(el("li", {}, r.label));
    panel.append(el("h3", {}, `Relations associatives (${detail.related.length})`), related);
  }
  const pathsBlock = el("div", { class: "paths" }, el("h3", {}, "Chemins d'accès"));
  for (const p of paths) pathsBlock.append(el("p", { class: "path" }, p));
  panel.append(pathsBlock);
  return panel;
}

export interface QueueCallbacks {
  onAccept(item: QueueItem, matchType: string): void;
  onReject(item: QueueItem): void;
  onSkip(): void;
}

function card(title: string, side: ConceptCard): HTMLElement {
  const block = el("div", { class: "card" });
  block.append(el("h3", {}, title), el("h4", {}, side.label), el("p", { class: "ark" }, side.ark));
  block.append(el("p", { class: "definition" }, side.definition ?? "(pas de définition)"));
  for (const p of side.paths) block.append(el("p", { class: "path" }, p));
  return block;
}

export function renderQueue(state: QueueState, item: QueueItem | null, callbacks: QueueCallbacks): HTMLElement {
  const panel = el("div", { class: "queue" });
  if (item === null) {
    panel.append(el("p", { class: "done" }, "File de révision vide : toutes les propositions sont traitées."));
    return panel;
  }
  panel.append(
    el(
      "p",
      { class: "progress" },
      `Proposition ${state.index + 1} / ${state.items.length}` +
        ` — palier ${item.tier ?? "?"} — score ${item.score ?? "?"}`,
    ),
  );
  const pair = el("div", { class: "pair" });
  pair.append(card("Source", item.source), card("Cible", item.target));
  panel.append(pair);

  const controls = el("div", { class: "controls" });
  const select = el("select", { class: "match-type" });
  for (const mt of MATCH_TYPES) {
    const option = el("option", { value: mt }, mt);
    if (mt === item.recommended) option.selected = true;
    select.append(option);
  }
  const accept = el("button", { class: "accept" }, "Accepter");
  accept.addEventListener("click", () => callbacks.onAccept(item, select.value));
  const reject = el("button", { class: "reject" }, "Rejeter");
  reject.addEventListener("click", () => callbacks.onReject(item));
  const skip = el("button", { class: "skip" }, "Passer");
  skip.addEventListener("click", () => callbacks.onSkip());
  controls.append(select, accept, reject, skip);
  panel.append(controls);
  return panel;
}

export function renderLog(entries: LogEntry[]): HTMLElement {
  const block = el("div", { class: "activity-log" }, el("h3", {}, "Journal des décisions"));
  if (entries.length === 0) {
    block.append(el("p", { class: "empty" }, "Aucune décision pour l'instant."));
    return block;
  }
  const list = el("ul", {});
  for (const entry of entries) {
    const line = el(
      "li",
      { class: entry.decision },
      `${entry.decision === "accept" ? "✓" : "✗"} ${entry.sourceLabel} → ${entry.targetLabel}` +
        (entry.decision === "accept" ? ` (${entry.matchType})` : " (rejeté)"),
    );
    if (entry.inverse) {
      line.append(
        el(
          "div",
          { class: "inverse" },
          `lien inverse : ${entry.inverse.sourceLabel} → ${entry.inverse.targetLabel} (${entry.inverse.matchType})`,
        ),
      );
    }
    list.append(line);
  }
  block.append(list);
  return block;
}

export function renderError(message: string, onRetry: () => void): HTMLElement {
  const banner = el("div", { class: "error-banner" }, el("span", {}, message));
  const retry = el("button", {}, "Réessayer");
  retry.addEventListener("click", onRetry);
  banner.append(retry);
  return banner;
}
