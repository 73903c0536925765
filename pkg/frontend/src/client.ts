/**
 * Typed access to the roster service. The console never computes rostering
 * logic itself — every verdict on screen came through this interface.
 */

import {
  CheckReport,
  CheckRequest,
  ErrorBody,
  MetaPlanList,
  SolveOutcome,
  SolveRequest,
  StaffRow,
  StatRow,
  checkReportSchema,
  errorBodySchema,
  metaPlanListSchema,
  solveOutcomeSchema,
  staffRowSchema,
  statRowSchema,
} from './types'
import { z } from 'zod'

/** A non-2xx reply, carrying the service's structured body. */
export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly body: ErrorBody,
  ) {
    super(body.message)
  }
}

export interface RosterClient {
  metaPlans(): Promise<MetaPlanList>
  staff(): Promise<StaffRow[]>
  stats(): Promise<StatRow[]>
  solve(request: SolveRequest): Promise<SolveOutcome>
  check(request: CheckRequest): Promise<CheckReport>
  putMetaPlan(id: string, document: unknown): Promise<void>
}

const staffListSchema = z.object({ staff: z.array(staffRowSchema) })
const statListSchema = z.object({ rows: z.array(statRowSchema) })
const jobSchema = z.object({
  jobId: z.string(),
  status: z.string(),
  result: solveOutcomeSchema.optional(),
})

const POLL_MS = 500

export class HttpRosterClient implements RosterClient {
  constructor(private readonly base: string = '') {}

  private async request(method: string, path: string, body?: unknown): Promise<unknown> {
    const response = await fetch(this.base + path, {
      method,
      headers: body === undefined ? {} : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    })
    const payload = response.status === 204 ? null : await response.json()
    if (!response.ok) {
      throw new ApiFailure(response.status, errorBodySchema.parse(payload))
    }
    if (response.status === 202) {
      return this.poll(jobSchema.parse(payload).jobId)
    }
    return payload
  }

  private async poll(jobId: string): Promise<unknown> {
    for (;;) {
      await new Promise((resolve) => setTimeout(resolve, POLL_MS))
      const raw = await this.request('GET', `/jobs/${jobId}`)
      const job = jobSchema.parse(raw)
      if (job.status === 'done') return job.result
    }
  }

  async metaPlans(): Promise<MetaPlanList> {
    return metaPlanListSchema.parse(await this.request('GET', '/metaplans'))
  }

  async staff(): Promise<StaffRow[]> {
    return staffListSchema.parse(await this.request('GET', '/staff')).staff
  }

  async stats(): Promise<StatRow[]> {
    return statListSchema.parse(await this.request('GET', '/stats')).rows
  }

  async solve(request: SolveRequest): Promise<SolveOutcome> {
    return solveOutcomeSchema.parse(await this.request('POST', '/solve', request))
  }

  async check(request: CheckRequest): Promise<CheckReport> {
    return checkReportSchema.parse(await this.request('POST', '/check', request))
  }

  async putMetaPlan(id: string, document: unknown): Promise<void> {
    await this.request('PUT', `/metaplans/${id}`, document)
  }
}
