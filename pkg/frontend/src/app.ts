/**
 * Single-page bootstrap: scheme pickers, tree browser tab and review tab.
 *
 * All state changes go through the documented API endpoints; nothing is
 * persisted client-side, so replaying the same session against a fresh
 * store reproduces the same final state.
 */

import { ApiClient, ApiError, type QueueItem, type TreeNode } from "./api.js";
import {
  advance,
  applyDecision,
  currentItem,
  emptyQueue,
  emptyTree,
  graftChildren,
  isExpanded,
  loadSuggestions,
  removeItem,
  toggleExpanded,
  type QueueState,
  type TreeState,
} from "./state.js";
import { renderConceptPanel, renderError, renderLog, renderQueue, renderTree } from "./views.js";

const api = new ApiClient();

let tree: TreeState = emptyTree();
let queue: QueueState = emptyQueue();
let treeScheme = "";
let reviewSrc = "";
let reviewTgt = "";
let minScore = 0.5;

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

function showError(target: HTMLElement, err: unknown, retry: () => void): void {
  const message =
    err instanceof ApiError
      ? err.status === 0
        ? "Connexion au service impossible."
        : `${err.code} : ${err.message}`
      : String(err);
  target.prepend(renderError(message, retry));
}

// -- tree tab -----------------------------------------------------------------

async function loadTree(): Promise<void> {
  const host = byId("tree-host");
  host.textContent = "";
  if (!treeScheme) return;
  try {
    const body = await api.tree(treeScheme, undefined, 2);
    tree = { ...emptyTree(), roots: body.roots };
    paintTree();
  } catch (err) {
    showError(host, err, loadTree);
  }
}

function paintTree(): void {
  const host = byId("tree-host");
  host.textContent = "";
  host.append(
    renderTree(tree, {
      onToggle: (node) => void toggleNode(node),
      onSelect: (node) => void selectNode(node),
    }),
  );
}

async function toggleNode(node: TreeNode): Promise<void> {
  if (!isExpanded(tree, node.ark) && node.children === null) {
    try {
      const body = await api.tree(treeScheme, node.ark, 1);
      const fetched = body.roots[0]?.children ?? [];
      tree = graftChildren(tree, node.ark, fetched);
    } catch (err) {
      showError(byId("tree-host"), err, () => void toggleNode(node));
      return;
    }
  }
  tree = toggleExpanded(tree, node.ark);
  paintTree();
}

async function selectNode(node: TreeNode): Promise<void> {
  tree = { ...tree, selected: node.ark };
  paintTree();
  const host = byId("concept-host");
  host.textContent = "Chargement…";
  try {
    const [detail, paths] = await Promise.all([api.concept(node.ark), api.conceptPaths(node.ark)]);
    host.textContent = "";
    host.append(renderConceptPanel(detail, paths.paths));
  } catch (err) {
    host.textContent = "";
    showError(host, err, () => void selectNode(node));
  }
}

// -- review tab ----------------------------------------------------------------

async function refreshQueue(): Promise<void> {
  const host = byId("queue-host");
  if (!reviewSrc || !reviewTgt) return;
  try {
    const body = await api.suggestions(reviewSrc, reviewTgt, minScore);
    queue = loadSuggestions(queue, body.items);
    paintQueue();
  } catch (err) {
    showError(host, err, () => void refreshQueue());
  }
}

function paintQueue(): void {
  const host = byId("queue-host");
  host.textContent = "";
  host.append(
    renderQueue(queue, currentItem(queue), {
      onAccept: (item, matchType) => void settle(item, "accept", matchType),
      onReject: (item) => void settle(item, "reject"),
      onSkip: () => {
        queue = advance(queue, 1);
        paintQueue();
      },
    }),
  );
  const logHost = byId("log-host");
  logHost.textContent = "";
  logHost.append(renderLog(queue.log));
}

async function settle(item: QueueItem, decision: "accept" | "reject", matchType?: string): Promise<void> {
  try {
    const result = await api.decide(item.mapping_id, decision, matchType);
    let inverse = null;
    if (result.inverse_id) {
      const accepted = await api.mappings("accepted");
      inverse = accepted.items.find((m) => m.id === result.inverse_id) ?? null;
    }
    queue = applyDecision(queue, item, decision, result, inverse);
    paintQueue();
  } catch (err) {
    if (err instanceof ApiError && err.isConflict) {
      // already decided elsewhere: drop the item and refetch the queue
      queue = removeItem(queue, item.mapping_id);
      paintQueue();
      void refreshQueue();
      return;
    }
    showError(byId("queue-host"), err, () => void settle(item, decision, matchType));
  }
}

// -- bootstrap ---------------------------------------------------------------------

async function fillSchemePickers(): Promise<void> {
  const body = await api.schemes();
  for (const selectId of ["tree-scheme", "review-src", "review-tgt"]) {
    const select = byId(selectId) as HTMLSelectElement;
    select.textContent = "";
    for (const scheme of body.items) {
      const option = document.createElement("option");
      option.value = scheme.id;
      option.textContent = `${scheme.title} (${scheme.id})`;
      select.append(option);
    }
  }
  if (body.items.length > 0) {
    treeScheme = body.items[0].id;
    reviewSrc = body.items[0].id;
    reviewTgt = body.items[Math.min(1, body.items.length - 1)].id;
    (byId("tree-scheme") as HTMLSelectElement).value = treeScheme;
    (byId("review-src") as HTMLSelectElement).value = reviewSrc;
    (byId("review-tgt") as HTMLSelectElement).value = reviewTgt;
  }
}

function wire(): void {
  byId("tree-scheme").addEventListener("change", (e) => {
    treeScheme = (e.target as HTMLSelectElement).value;
    void loadTree();
  });
  byId("review-src").addEventListener("change", (e) => {
    reviewSrc = (e.target as HTMLSelectElement).value;
  });
  byId("review-tgt").addEventListener("change", (e) => {
    reviewTgt = (e.target as HTMLSelectElement).value;
  });
  byId("min-score").addEventListener("change", (e) => {
    minScore = Number((e.target as HTMLInputElement).value) || 0.5;
  });
  byId("load-queue").addEventListener("click", () => {
    queue = emptyQueue();
    void refreshQueue();
  });
  byId("refresh-queue").addEventListener("click", () => void refreshQueue());
  for (const tab of Array.from(document.querySelectorAll<HTMLButtonElement>("[data-tab]"))) {
    tab.addEventListener("click", () => {
      for (const panel of Array.from(document.querySelectorAll<HTMLElement>(".tab-panel"))) {
        panel.hidden = panel.id !== tab.dataset.tab;
      }
      for (const other of Array.from(document.querySelectorAll<HTMLButtonElement>("[data-tab]"))) {
        other.classList.toggle("active", other === tab);
      }
    });
  }
}

async function main(): Promise<void> {
  wire();
  try {
    await fillSchemePickers();
    await loadTree();
  } catch (err) {
    showError(byId("tree-host"), err, () => void main());
  }
}

if (typeof document !== "undefined" && document.getElementById("tree-host")) {
  void main();
}
