import type { PredictRequest, PredictResponse } from './types.js'

export class ServiceError extends Error {
  status: number
  constructor(status: number, message: string) {
    super(message)
    this.status = status
  }
}

let inflight: AbortController | null = null

/**
 * POST the document to /api/predict. Only one request is in flight at a
 * time: a newer submission aborts the older one.
 */
export async function predictDocument(
  baseUrl: string,
  request: PredictRequest,
  fetchFn: typeof fetch = fetch,
): Promise<PredictResponse> {
  if (inflight) inflight.abort()
  const controller = new AbortController()
  inflight = controller
  try {
    const res = await fetchFn(`${baseUrl}/api/predict`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(request),
      signal: controller.signal,
    })
    if (!res.ok) {
      let detail = ''
      try {
        const body = await res.json()
        detail = body.error ?? ''
      } catch {
        /* non-JSON error body */
      }
      throw new ServiceError(res.status, detail || `service returned ${res.status}`)
    }
    return (await res.json()) as PredictResponse
  } finally {
    if (inflight === controller) inflight = null
  }
}

export async function fetchHealth(
  baseUrl: string,
  fetchFn: typeof fetch = fetch,
): Promise<{ ok: boolean; version?: number }> {
  try {
    const res = await fetchFn(`${baseUrl}/api/health`)
    if (!res.ok) return { ok: false }
    const body = await res.json()
    return { ok: body.status === 'ok', version: body.model_version }
  } catch {
    return { ok: false }
  }
}
