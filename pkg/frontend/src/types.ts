/**
 * Service document shapes.
 *
 * Everything the console shows comes from these payloads; the zod schemas
 * reject drift between the UI and the service early instead of rendering
 * garbage.
 */

import { z } from 'zod'

export const tripleSchema = z.tuple([z.string(), z.string(), z.string()])
export type Triple = z.infer<typeof tripleSchema>

export const metaPlanSchema = z.object({
  id: z.string(),
  name: z.string(),
  date: z.string().nullable(),
  shifts: z.array(
    z.object({
      id: z.string(),
      duration: z.number(),
      predecessor: z.string().nullable(),
    }),
  ),
  requirements: z.array(
    z.object({ shift: z.string(), skill: z.string(), count: z.number() }),
  ),
  doubleShifts: z.array(z.object({ small: z.string(), big: z.string() })),
})
export type MetaPlan = z.infer<typeof metaPlanSchema>

export const metaPlanListSchema = z.object({
  metaPlans: z.array(metaPlanSchema),
  revision: z.number(),
})
export type MetaPlanList = z.infer<typeof metaPlanListSchema>

export const staffRowSchema = z.object({
  id: z.string(),
  skills: z.array(z.string()),
  absences: z.array(z.string()),
  available: z.boolean(),
})
export type StaffRow = z.infer<typeof staffRowSchema>

export const statRowSchema = z.object({
  employee: z.string(),
  weeklyHours: z.number(),
  dailyHours: z.number(),
  overtimeHours: z.number(),
  lastHeavyAllocation: z.string(),
})
export type StatRow = z.infer<typeof statRowSchema>

export const violationSchema = z.object({
  kind: z.string(),
  employees: z.array(z.string()),
  shift: z.string().nullable(),
  skill: z.string().nullable(),
  extra: z.array(z.string()),
  requiredCount: z.number().nullable(),
  actualCount: z.number().nullable(),
  message: z.string(),
})
export type Violation = z.infer<typeof violationSchema>

export const assignmentSchema = z.object({ triples: z.array(tripleSchema) })

export const solveOutcomeSchema = z.object({
  status: z.enum(['feasible', 'degraded', 'infeasible', 'resource-limit']),
  modeUsed: z.string().nullable(),
  assignment: assignmentSchema.nullable(),
  alternatives: z.array(assignmentSchema),
  waivedPreferences: z.array(violationSchema),
  diagnostics: z.array(z.string()),
})
export type SolveOutcome = z.infer<typeof solveOutcomeSchema>

export const checkReportSchema = z.object({
  consistent: z.boolean(),
  violations: z.array(violationSchema),
})
export type CheckReport = z.infer<typeof checkReportSchema>

export const issueSchema = z.object({
  severity: z.string(),
  code: z.string(),
  message: z.string(),
})
export type Issue = z.infer<typeof issueSchema>

export const errorBodySchema = z.object({
  code: z.string(),
  message: z.string(),
  issues: z.array(issueSchema),
})
export type ErrorBody = z.infer<typeof errorBodySchema>

export interface SolveRequest {
  metaPlanIds: string[]
  mode: string
  preAssignments: Triple[]
  exclusions: [string, string][]
}

export interface CheckRequest {
  metaPlanIds: string[]
  team: Triple[]
}
