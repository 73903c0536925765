/**
 * Store behaviour against recorded service exchanges. The replay client
 * throws on any request the real service never answered, so these tests
 * prove the console asks the service exactly what the recorder asked —
 * and never invents a verdict on its own.
 */

import { describe, expect, it } from 'vitest'
import { ApiFailure, RosterClient } from '../src/client'
import { AppStore, TeamRow, attaches, suggestionFor } from '../src/store'
import {
  SolveOutcome,
  Violation,
  checkReportSchema,
  solveOutcomeSchema,
} from '../src/types'
import { ReplayClient, depotExchanges, exchange } from './replay'
import script from './fixtures/script.json'

const daySolve = solveOutcomeSchema.parse(exchange('day solve').response.body)
const dayEdited = checkReportSchema.parse(exchange('day check edited').response.body)
const conflictSolve = solveOutcomeSchema.parse(exchange('conflict solve').response.body)
const swappedReport = checkReportSchema.parse(
  exchange('conflict check swapped').response.body,
)

function gridRows(outcome: SolveOutcome): { shift: string; skill: string; employee: string }[] {
  const triples = outcome.assignment?.triples ?? []
  return triples
    .map(([employee, shift, skill]) => ({ shift, skill, employee }))
    .sort((a, b) => {
      const ka = `${a.shift} ${a.skill} ${a.employee}`
      const kb = `${b.shift} ${b.skill} ${b.employee}`
      return ka < kb ? -1 : ka > kb ? 1 : 0
    })
}

async function dayStore(client?: RosterClient): Promise<AppStore> {
  const store = new AppStore(client ?? new ReplayClient(depotExchanges('day')))
  await store.refresh()
  store.togglePlan(script.dayPlanId)
  return store
}

async function conflictStore(): Promise<AppStore> {
  const store = new AppStore(new ReplayClient(depotExchanges('conflict')))
  await store.refresh()
  store.togglePlan(script.conflictPlanId)
  return store
}

function onlyFailures(
  inner: RosterClient,
  overrides: Partial<Record<'solve' | 'check', () => Error>>,
  times = 1,
): RosterClient {
  let solveLeft = overrides.solve ? times : 0
  let checkLeft = overrides.check ? times : 0
  return {
    metaPlans: () => inner.metaPlans(),
    staff: () => inner.staff(),
    stats: () => inner.stats(),
    solve: (request) => {
      if (solveLeft > 0 && overrides.solve) {
        solveLeft -= 1
        return Promise.reject(overrides.solve())
      }
      return inner.solve(request)
    },
    check: (request) => {
      if (checkLeft > 0 && overrides.check) {
        checkLeft -= 1
        return Promise.reject(overrides.check())
      }
      return inner.check(request)
    },
    putMetaPlan: (id, document) => inner.putMetaPlan(id, document),
  }
}

describe('solving', () => {
  it('renders exactly the triples the service returned', async () => {
    const store = await dayStore()
    await store.run()
    const expected = gridRows(daySolve)
    expect(store.state.team.map((r) => [r.shift, r.skill, r.employee])).toEqual(
      expected.map((r) => [r.shift, r.skill, r.employee]),
    )
    expect(store.state.banner).toBeNull()
    expect(store.state.dirty).toBe(false)
  })

  it('asks for a selection instead of solving nothing', async () => {
    const client = new ReplayClient(depotExchanges('day'))
    const store = new AppStore(client)
    await store.refresh()
    await store.run()
    expect(store.state.notice).toMatch(/select at least one/)
    expect(client.log).not.toContain('day solve')
  })

  it('reports infeasible diagnostics in the notice', async () => {
    const replay = new ReplayClient(depotExchanges('day'))
    const stub: RosterClient = {
      metaPlans: () => replay.metaPlans(),
      staff: () => replay.staff(),
      stats: () => replay.stats(),
      check: (request) => replay.check(request),
      putMetaPlan: (id, document) => replay.putMetaPlan(id, document),
      solve: () =>
        Promise.resolve({
          status: 'infeasible' as const,
          modeUsed: null,
          assignment: null,
          alternatives: [],
          waivedPreferences: [],
          diagnostics: ['no feasible team under strict mode'],
        }),
    }
    const store = await dayStore(stub)
    await store.run()
    expect(store.state.team).toEqual([])
    expect(store.state.notice).toMatch(/no feasible team/)
  })

  it('shows a degraded banner with the waived preferences', async () => {
    const store = await conflictStore()
    await store.run()
    expect(store.state.team).toHaveLength(2)
    expect(store.state.banner).not.toBeNull()
    expect(store.state.banner?.modeUsed).toBe('prioritized')
    expect(store.state.banner?.waived.map((v) => v.kind)).toEqual(['fairness'])
  })
})

describe('team edits and checks', () => {
  it('marks both rows of a double booking and clears them on revert', async () => {
    const store = await dayStore()
    await store.run()
    const original = store.state.team[script.editIndex]!.employee
    const donorRow = store.state.team.findIndex(
      (r) => r.employee === script.donor && r.shift === script.donorShift,
    )
    expect(donorRow).toBeGreaterThanOrEqual(0)

    store.editCell(script.editIndex, script.donor)
    expect(store.state.dirty).toBe(true)
    await store.idle()

    expect(store.state.dirty).toBe(false)
    expect(store.state.violations).toEqual(dayEdited.violations)
    const marked = store.state.team
      .map((row, i) => [row, i] as [TeamRow, number])
      .filter(([row]) => row.markers.length > 0)
      .map(([, i]) => i)
    expect(marked.sort((a, b) => a - b)).toEqual(
      [script.editIndex, donorRow].sort((a, b) => a - b),
    )
    expect(store.state.team[script.editIndex]!.markers[0]!.kind).toBe('multiShift')

    store.editCell(script.editIndex, original)
    await store.idle()
    expect(store.state.violations).toEqual([])
    expect(store.state.team.every((row) => row.markers.length === 0)).toBe(true)
  })

  it('coalesces edits made while a check is in flight', async () => {
    const client = new ReplayClient(depotExchanges('day'))
    const store = await dayStore(client)
    await store.run()
    const row0 = store.state.team[0]!.employee

    store.editCell(script.editIndex, script.donor)
    store.editCell(0, 'nobody-recorded')
    store.editCell(0, row0)
    await store.idle()

    const checks = client.log.filter((name) => name.includes('check'))
    expect(checks).toEqual(['day check edited', 'day check edited'])
    expect(store.state.violations).toEqual(dayEdited.violations)
  })

  it('keeps the grid dirty when a check drops, until a retry lands', async () => {
    const replay = new ReplayClient(depotExchanges('day'))
    const store = await dayStore(
      onlyFailures(replay, { check: () => new Error('socket hang up') }),
    )
    await store.run()
    store.editCell(script.editIndex, script.donor)
    await store.idle()
    expect(store.state.checkError).toMatch(/socket hang up/)
    expect(store.state.dirty).toBe(true)

    store.retryCheck()
    await store.idle()
    expect(store.state.checkError).toBeNull()
    expect(store.state.dirty).toBe(false)
    expect(store.state.violations).toEqual(dayEdited.violations)
  })

  it('explains a swap with the employee the rules prefer', async () => {
    const store = await conflictStore()
    await store.run()

    store.editCell(script.swapFirst.index, script.swapFirst.employee)
    await store.idle()
    expect(store.state.violations.map((v) => v.kind)).toContain('multiRole')

    store.editCell(script.swapSecond.index, script.swapSecond.employee)
    await store.idle()
    expect(store.state.violations).toEqual(swappedReport.violations)
    const turnover = store.state.violations.find((v) => v.kind === 'turnover')!
    expect(suggestionFor(turnover)).toBe(
      `prefer ${turnover.employees[0]} over ${turnover.employees[1]}`,
    )
    const swappedRow = store.state.team[script.swapFirst.index]!
    expect(swappedRow.markers.map((v) => v.kind)).toContain('turnover')
  })
})

describe('availability lists', () => {
  it('keeps an excluded hand off the shift', async () => {
    const store = await dayStore()
    store.exclude(script.donor, script.donorShift)
    await store.run()
    expect(
      store.state.team.some(
        (r) => r.employee === script.donor && r.shift === script.donorShift,
      ),
    ).toBe(false)
  })

  it('puts a pre-assigned hand on the requested slot', async () => {
    const store = await dayStore()
    store.include(script.includeEmployee, script.includeShift, script.includeSkill)
    store.include(script.includeEmployee, script.includeShift, script.includeSkill)
    expect(store.state.inclusionList).toHaveLength(1)
    await store.run()
    expect(
      store.state.team.some(
        (r) =>
          r.employee === script.includeEmployee &&
          r.shift === script.includeShift &&
          r.skill === script.includeSkill,
      ),
    ).toBe(true)
  })

  it('rejects overlapping include and exclude entries', async () => {
    const store = await dayStore()
    store.exclude(script.donor, script.donorShift)
    store.include(script.donor, script.donorShift, 'dock')
    expect(store.state.availabilityError).toMatch(/excluded/)
    expect(store.state.inclusionList).toEqual([])

    store.clearAvailability(script.donor, script.donorShift)
    expect(store.state.exclusionList).toEqual([])

    store.include(script.donor, script.donorShift, 'dock')
    store.exclude(script.donor, script.donorShift)
    expect(store.state.availabilityError).toMatch(/pre-assigned/)
    expect(store.state.exclusionList).toEqual([])
  })
})

describe('service failures', () => {
  it('turns a 409 into inline issues', async () => {
    const failure = () =>
      new ApiFailure(409, {
        code: 'unknown-plan',
        message: 'plan vanished meanwhile',
        issues: [],
      })
    const store = await dayStore(
      onlyFailures(new ReplayClient(depotExchanges('day')), { solve: failure }, 99),
    )
    await store.run()
    expect(store.state.formIssues).toEqual([
      { severity: 'error', code: 'unknown-plan', message: 'plan vanished meanwhile' },
    ])
  })

  it('turns a 503 into a budget notice and retries cleanly', async () => {
    const failure = () =>
      new ApiFailure(503, {
        code: 'resource-limit',
        message: 'solver budget exhausted',
        issues: [],
      })
    const store = await dayStore(
      onlyFailures(new ReplayClient(depotExchanges('day')), { solve: failure }),
    )
    await store.run()
    expect(store.state.budgetNotice).toMatch(/budget exhausted/)
    expect(store.state.team).toEqual([])

    await store.retryRun()
    expect(store.state.budgetNotice).toBeNull()
    expect(store.state.team).toHaveLength(gridRows(daySolve).length)
  })

  it('surfaces rejected plan edits as field issues', async () => {
    const store = await dayStore()
    store.openForm(script.dayPlanId)
    store.setRequirementCount(script.putRequirementIndex, 0)
    await store.submitForm()
    expect(store.state.form).not.toBeNull()
    expect(store.state.form?.issues.map((i) => i.code)).toContain(
      'bad-requirement-count',
    )
  })
})

describe('marker attachment', () => {
  const row = (shift: string, skill: string, employee: string): TeamRow => ({
    shift,
    skill,
    employee,
    markers: [],
  })
  const violation = (patch: Partial<Violation>): Violation => ({
    kind: 'count',
    employees: [],
    shift: null,
    skill: null,
    extra: [],
    requiredCount: null,
    actualCount: null,
    message: '',
    ...patch,
  })

  it('anchors headcount problems to every row of the slot', () => {
    const v = violation({ kind: 'count', shift: 'sh1', skill: 's1' })
    expect(attaches(v, row('sh1', 's1', 'anyone'))).toBe(true)
    expect(attaches(v, row('sh1', 's2', 'anyone'))).toBe(false)
    expect(attaches(v, row('sh2', 's1', 'anyone'))).toBe(false)
  })

  it('anchors double bookings to both shifts of the employee', () => {
    const v = violation({
      kind: 'multiShift',
      employees: ['e1'],
      shift: 'sh1',
      extra: ['sh2'],
    })
    expect(attaches(v, row('sh1', 's1', 'e1'))).toBe(true)
    expect(attaches(v, row('sh2', 's1', 'e1'))).toBe(true)
    expect(attaches(v, row('sh2', 's1', 'e2'))).toBe(false)
  })

  it('suggests nothing for hard violations', () => {
    expect(suggestionFor(violation({ kind: 'count' }))).toBeNull()
    expect(
      suggestionFor(violation({ kind: 'turnover', employees: ['e1', 'e2'] })),
    ).toBe('prefer e1 over e2')
  })
})
