/**
 * Typed client for the pivotheso HTTP API.
 *
 * The fetch function is injectable so the client is testable without a
 * browser. Domain failures are mapped onto ApiError with the HTTP status;
 * 409 (already decided / conflicting type) is what the review queue handles
 * inline.
 */

export interface SchemeInfo {
  id: string;
  title: string;
  profile: string;
  top_concepts: string[];
}

export interface LabelInfo {
  lang: string;
  text: string;
}

export interface DefinitionInfo {
  text: string;
  sources: string[];
  external_resources: string[];
}

export interface ConceptDetail {
  ark: string;
  scheme: string;
  pref_labels: Record<string, string>;
  alt_labels: LabelInfo[];
  definition: DefinitionInfo | null;
  broader: string[];
  narrower: string[];
  related: { ark: string; label: string }[];
  is_grouping: boolean;
}

export interface TreeNode {
  ark: string;
  label: string;
  is_grouping: boolean;
  narrower_count: number;
  children: TreeNode[] | null;
}

export interface ConceptCard {
  ark: string;
  label: string;
  definition: string | null;
  paths: string[];
}

export interface QueueItem {
  mapping_id: string;
  source: ConceptCard;
  target: ConceptCard;
  tier: string | null;
  score: number | null;
  recommended: string;
}

export interface MappingRecord {
  id: string;
  source: string;
  source_label: string | null;
  target: string;
  target_label: string | null;
  match_type: string;
  status: string;
  score: number | null;
  tier: string | null;
  rationale: string;
  inverse_id: string | null;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
    private readonly base: string = "",
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, "ConnectionFailed", String(err));
    }
    if (!response.ok) {
      let code = "HttpError";
      let detail = `${response.status}`;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        code = body.error ?? code;
        detail = body.detail ?? detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, code, detail);
    }
    return (await response.json()) as T;
  }

  schemes(): Promise<{ total: number; items: SchemeInfo[] }> {
    return this.request("/api/schemes");
  }

  concept(ark: string): Promise<ConceptDetail> {
    return this.request(`/api/concepts/${encodeConceptPath(ark)}`);
  }

  conceptPaths(ark: string): Promise<{ ark: string; paths: string[] }> {
    return this.request(`/api/concepts/${encodeConceptPath(ark)}/paths`);
  }

  tree(scheme: string, root?: string, depth = 2): Promise<{ scheme: string; roots: TreeNode[] }> {
    const params = new URLSearchParams({ depth: String(depth) });
    if (root) params.set("root", root);
    return this.request(`/api/schemes/${encodeURIComponent(scheme)}/tree?${params}`);
  }

  suggestions(src: string, tgt: string, minScore: number): Promise<{ total: number; items: QueueItem[] }> {
    const params = new URLSearchParams({ src, tgt, min_score: String(minScore) });
    return this.request(`/api/suggestions?${params}`);
  }

  decide(mappingId: string, decision: "accept" | "reject", matchType?: string): Promise<MappingRecord> {
    return this.request(`/api/mappings/${encodeURIComponent(mappingId)}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(matchType ? { decision, match_type: matchType } : { decision }),
    });
  }

  mappings(status?: string): Promise<{ total: number; items: MappingRecord[] }> {
    const params = status ? `?${new URLSearchParams({ status })}` : "";
    return this.request(`/api/mappings${params}`);
  }
}

/** Concept arks contain ':' and '/' which must survive as path segments. */
export function encodeConceptPath(ark: string): string {
  return ark.split("/").map(encodeURIComponent).join("/");
}
