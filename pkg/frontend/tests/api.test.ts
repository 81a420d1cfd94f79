import { describe, expect, it, vi } from 'vitest'

import { fetchHealth, predictDocument, ServiceError } from '../src/api.js'
import type { PredictResponse } from '../src/types.js'

const RESPONSE: PredictResponse = {
  sentences: [
    { text: 'A sentence.', probability: 0.8, worthy: true, section_type: 'intro' },
  ],
  model_info: {
    family: 'enlr',
    attention_variant: null,
    contextual: true,
    representation: 'bow',
    version: 1,
    vocab_hash: 'abc',
  },
}

function jsonResponse(body: unknown, status = 200) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  } as Response
}

describe('predictDocument', () => {
  it('posts the request and returns the parsed body', async () => {
    const fetchFn = vi.fn(async () => jsonResponse(RESPONSE))
    const out = await predictDocument('http://svc', { raw_text: 'Hi there.' }, fetchFn)
    expect(out).toEqual(RESPONSE)
    expect(fetchFn).toHaveBeenCalledTimes(1)
    const [url, init] = fetchFn.mock.calls[0] as unknown as [string, RequestInit]
    expect(url).toBe('http://svc/api/predict')
    expect(JSON.parse(String(init.body))).toEqual({ raw_text: 'Hi there.' })
  })

  it('raises ServiceError with the status for 4xx/5xx', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ error: 'bad threshold' }, 400))
    await expect(predictDocument('http://svc', { raw_text: 'x' }, fetchFn)).rejects.toThrowError(
      ServiceError,
    )
    try {
      await predictDocument('http://svc', { raw_text: 'x' }, fetchFn)
    } catch (err) {
      expect((err as ServiceError).status).toBe(400)
      expect((err as ServiceError).message).toBe('bad threshold')
    }
  })

  it('aborts the previous in-flight request when a new one starts', async () => {
    const seenSignals: AbortSignal[] = []
    const fetchFn = vi.fn((_url: string, init?: RequestInit) => {
      seenSignals.push(init!.signal as AbortSignal)
      return new Promise<Response>((resolve) => {
        setTimeout(() => resolve(jsonResponse(RESPONSE)), 5)
      })
    })
    const first = predictDocument('http://svc', { raw_text: 'first' }, fetchFn as any)
    const second = predictDocument('http://svc', { raw_text: 'second' }, fetchFn as any)
    await Promise.all([first.catch(() => undefined), second])
    expect(seenSignals).toHaveLength(2)
    expect(seenSignals[0].aborted).toBe(true)
    expect(seenSignals[1].aborted).toBe(false)
  })
})

describe('fetchHealth', () => {
  it('reports ok with the model version', async () => {
    const fetchFn = vi.fn(async () => jsonResponse({ status: 'ok', model_version: 1 }))
    expect(await fetchHealth('http://svc', fetchFn)).toEqual({ ok: true, version: 1 })
  })

  it('reports unavailable on 503 or network failure', async () => {
    const down = vi.fn(async () => jsonResponse({ status: 'unavailable' }, 503))
    expect((await fetchHealth('http://svc', down)).ok).toBe(false)
    const boom = vi.fn(async () => {
      throw new Error('refused')
    })
    expect((await fetchHealth('http://svc', boom as any)).ok).toBe(false)
  })
})
