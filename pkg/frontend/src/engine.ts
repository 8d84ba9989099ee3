/**
 * Engine boundary: everything the viewer knows about geometry arrives as a
 * scene document, either from the local scene service (POST /scene) or from
 * pre-built documents (files, fixtures).
 */

import {
  BuildRequest,
  SceneDocument,
  SceneDocumentSchema,
} from "./types.js";

export class EngineError extends Error {
  constructor(
    readonly errorName: string,
    detail?: string,
  ) {
    super(detail ? `${errorName}: ${detail}` : errorName);
  }
}

export function parseSceneDocument(text: string): SceneDocument {
  let raw: unknown;
  try {
    raw = JSON.parse(text);
  } catch (e) {
    throw new EngineError("ParseError", e instanceof Error ? e.message : String(e));
  }
  const result = SceneDocumentSchema.safeParse(raw);
  if (!result.success) {
    throw new EngineError("ParseError", result.error.issues[0]?.message ?? "invalid document");
  }
  return result.data;
}

export interface EngineBoundary {
  buildScene(request: BuildRequest): Promise<SceneDocument>;
}

/** Talks to `hopf4d serve` (or any compatible endpoint). */
export class HttpEngine implements EngineBoundary {
  constructor(readonly baseUrl: string) {}

  async buildScene(request: BuildRequest): Promise<SceneDocument> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/scene`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(request),
      });
    } catch (e) {
      throw new EngineError("Unreachable", e instanceof Error ? e.message : String(e));
    }
    if (!response.ok) {
      let name = `HTTP ${response.status}`;
      let detail: string | undefined;
      try {
        const body = (await response.json()) as { error?: string; detail?: string };
        if (body && typeof body.error === "string") {
          name = body.error;
          detail = body.detail;
        }
      } catch {
        // non-JSON error body; keep the HTTP status as the name
      }
      throw new EngineError(name, detail);
    }
    return parseSceneDocument(await response.text());
  }
}

/** Serves pre-built scene documents keyed by their request JSON. */
export class StaticEngine implements EngineBoundary {
  private documents = new Map<string, SceneDocument>();

  register(request: BuildRequest, document: SceneDocument): void {
    this.documents.set(JSON.stringify(request), document);
  }

  async buildScene(request: BuildRequest): Promise<SceneDocument> {
    const doc = this.documents.get(JSON.stringify(request));
    if (!doc) {
      throw new EngineError("Unavailable", "no pre-built document for this request");
    }
    return doc;
  }
}

/**
 * Latest-wins coalescing: at most one geometry request in flight; while one
 * is pending, newer submissions replace the queued request so drags never
 * pile up.
 */
export class LatestWins {
  private inFlight = false;
  private queued: BuildRequest | null = null;

  constructor(
    private readonly engine: EngineBoundary,
    private readonly apply: (doc: SceneDocument, request: BuildRequest) => void,
    private readonly onError: (error: EngineError, request: BuildRequest) => void = () => {},
  ) {}

  submit(request: BuildRequest): void {
    if (this.inFlight) {
      this.queued = request;
      return;
    }
    void this.run(request);
  }

  private async run(request: BuildRequest): Promise<void> {
    this.inFlight = true;
    try {
      const doc = await this.engine.buildScene(request);
      this.apply(doc, request);
    } catch (e) {
      this.onError(
        e instanceof EngineError ? e : new EngineError("Unknown", String(e)),
        request,
      );
    } finally {
      this.inFlight = false;
      if (this.queued) {
        const next = this.queued;
        this.queued = null;
        void this.run(next);
      }
    }
  }
}
