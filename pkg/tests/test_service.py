"""Endpoint behavior of the HTTP service, exercised in-process."""

import time

import pytest
from fastapi.testclient import TestClient

from portroster.service import create_app
from portroster.store import load_snapshot, save_snapshot
from portroster.synth import BASE_MONDAY, synthetic_depot

DAY0_PLAN = "plan_%d" % BASE_MONDAY


@pytest.fixture()
def depot_path(tmp_path):
    path = tmp_path / "depot.json"
    save_snapshot(synthetic_depot(days=3), path)
    return path


@pytest.fixture()
def client(depot_path):
    app = create_app(depot_path)
    with TestClient(app, raise_server_exceptions=False) as c:
        yield c


def test_metaplans_listing(client):
    body = client.get("/metaplans").json()
    assert [p["id"] for p in body["metaPlans"]] == [
        "plan_%d" % (BASE_MONDAY + k) for k in range(3)
    ]
    assert body["revision"] == 1


def test_staff_listing(client):
    body = client.get("/staff").json()
    assert len(body["staff"]) == 30
    first = body["staff"][0]
    assert set(first) == {"id", "skills", "absences", "available"}
    assert first["available"] is True


def test_stats_rows(client):
    rows = client.get("/stats").json()["rows"]
    assert len(rows) == 30
    assert set(rows[0]) == {
        "employee",
        "weeklyHours",
        "dailyHours",
        "overtimeHours",
        "lastHeavyAllocation",
    }


def test_solve_roundtrips_through_check(client):
    solved = client.post("/solve", json={"metaPlanIds": [DAY0_PLAN]})
    assert solved.status_code == 200
    doc = solved.json()
    assert doc["status"] == "feasible"
    team = doc["assignment"]["triples"]
    checked = client.post(
        "/check", json={"metaPlanIds": [DAY0_PLAN], "team": team}
    ).json()
    assert checked["consistent"] is True
    assert checked["violations"] == []


def test_check_flags_a_broken_team(client):
    doc = client.post("/solve", json={"metaPlanIds": [DAY0_PLAN]}).json()
    team = doc["assignment"]["triples"]
    body = client.post(
        "/check", json={"metaPlanIds": [DAY0_PLAN], "team": team[1:]}
    ).json()
    assert body["consistent"] is False
    assert any(v["kind"] == "count" for v in body["violations"])


def test_check_rejects_malformed_triples(client):
    r = client.post(
        "/check", json={"metaPlanIds": [DAY0_PLAN], "team": [["a", "b"]]}
    )
    assert r.status_code == 409
    assert r.json()["code"] == "malformed-team"


def test_solve_unknown_plan_is_404(client):
    r = client.post("/solve", json={"metaPlanIds": ["ghost"]})
    assert r.status_code == 404
    assert r.json()["code"] == "unknown-meta-plan"


def test_solve_rejects_unknown_mode(client):
    r = client.post("/solve", json={"metaPlanIds": [DAY0_PLAN], "mode": "best"})
    assert r.status_code == 409
    assert r.json()["code"] == "invalid-mode"


def test_solve_reports_validation_issues(client):
    r = client.post(
        "/solve",
        json={
            "metaPlanIds": [DAY0_PLAN],
            "preAssignments": [["ghost", "x", "dock"]],
        },
    )
    assert r.status_code == 409
    body = r.json()
    assert body["code"] == "invalid-instance"
    assert body["issues"]
    assert all({"severity", "code", "message"} <= set(i) for i in body["issues"])


def test_malformed_body_is_structured_error(client):
    r = client.post("/solve", json={"metaPlanIds": "oops"})
    assert r.status_code == 400
    body = r.json()
    assert set(body) == {"code", "message", "issues"}


def test_metaplan_crud_cycle(client):
    doc = {
        "name": "spare day",
        "date": "2026-03-02",
        "shifts": [{"id": "d9558h08", "duration": 8}],
        "requirements": [{"shift": "d9558h08", "skill": "dock", "count": 1}],
    }
    created = client.put("/metaplans/spare", json=doc)
    assert created.status_code == 201
    assert created.json()["metaPlan"]["id"] == "spare"
    replaced = client.put("/metaplans/spare", json=doc)
    assert replaced.status_code == 200
    assert replaced.json()["revision"] > created.json()["revision"]

    listed = client.get("/metaplans").json()["metaPlans"]
    assert any(p["id"] == "spare" for p in listed)

    solved = client.post("/solve", json={"metaPlanIds": ["spare"]})
    assert solved.json()["status"] == "feasible"

    assert client.delete("/metaplans/spare").status_code == 204
    assert client.delete("/metaplans/spare").status_code == 404


def test_metaplan_put_rejects_bad_documents(client):
    assert (
        client.put("/metaplans/x", json={"shifts": "nope"}).status_code == 409
    )
    r = client.put(
        "/metaplans/x",
        json={
            "shifts": [{"id": "d9558h08", "duration": 8}],
            "requirements": [
                {"shift": "d9558h08", "skill": "nosuch", "count": 1}
            ],
        },
    )
    assert r.status_code == 409
    assert any(
        i["code"] == "unknown-requirement-skill" for i in r.json()["issues"]
    )


def test_metaplan_put_id_mismatch(client):
    r = client.put("/metaplans/x", json={"id": "y"})
    assert r.status_code == 409
    assert r.json()["code"] == "id-mismatch"


def test_simulation_is_isolated_unless_committed(client, depot_path):
    body = client.post(
        "/simulate", json={"startDate": "2026-01-05", "days": 3}
    ).json()
    assert [d["status"] for d in body["perDayOutcomes"]] == ["feasible"] * 3
    assert body["committed"] is False
    assert body["revision"] == 1
    assert load_snapshot(depot_path).revision == 1

    committed = client.post(
        "/simulate", json={"startDate": "2026-01-05", "days": 3, "commit": True}
    ).json()
    assert committed["committed"] is True
    assert committed["revision"] == 2
    after = load_snapshot(depot_path)
    assert after.revision == 2
    assert len(after.committed_plans) == 3


def test_simulate_aggregate_stats_shape(client):
    stats = client.post(
        "/simulate", json={"startDate": "2026-01-05", "days": 2}
    ).json()["aggregateStats"]
    assert {
        "totalOvertimeHours",
        "degradedDays",
        "infeasibleDays",
        "maxWeeklyHours",
        "minWeeklyHours",
    } <= set(stats)


def test_simulate_rejects_bad_date(client):
    r = client.post("/simulate", json={"startDate": "05/01/2026"})
    assert r.status_code == 409
    assert r.json()["code"] == "invalid-date"


def test_long_solve_becomes_a_polled_job(depot_path):
    app = create_app(depot_path, async_threshold=0.0)
    with TestClient(app, raise_server_exceptions=False) as client:
        accepted = client.post("/solve", json={"metaPlanIds": [DAY0_PLAN]})
        assert accepted.status_code == 202
        job = accepted.json()
        assert job["status"] == "running"

        deadline = time.monotonic() + 30
        while time.monotonic() < deadline:
            polled = client.get("/jobs/%s" % job["jobId"]).json()
            if polled["status"] == "done":
                break
            time.sleep(0.02)
        assert polled["status"] == "done"
        assert polled["result"]["status"] == "feasible"

        # results stay pollable
        again = client.get("/jobs/%s" % job["jobId"]).json()
        assert again["status"] == "done"

        assert client.get("/jobs/unknown").status_code == 404


def test_instant_errors_skip_the_job_queue(depot_path):
    # an unknown plan fails before the async threshold can matter
    app = create_app(depot_path, async_threshold=0.0)
    with TestClient(app, raise_server_exceptions=False) as client:
        r = client.post("/solve", json={"metaPlanIds": ["ghost"]})
        assert r.status_code == 404
        assert r.json()["code"] == "unknown-meta-plan"


def test_job_errors_surface_with_their_status(depot_path):
    from portroster.asp.solve import SolveLimits

    app = create_app(
        depot_path, async_threshold=0.0, limits=SolveLimits(max_steps=5)
    )
    with TestClient(app, raise_server_exceptions=False) as client:
        first = client.post("/solve", json={"metaPlanIds": [DAY0_PLAN]})
        if first.status_code == 202:  # grounding outlasted the zero threshold
            job_id = first.json()["jobId"]
            deadline = time.monotonic() + 30
            while time.monotonic() < deadline:
                first = client.get("/jobs/%s" % job_id)
                if (
                    first.status_code != 200
                    or first.json().get("status") != "running"
                ):
                    break
                time.sleep(0.02)
        assert first.status_code == 503
        assert first.json()["code"] == "resource-limit"


def test_reads_do_not_change_the_depot(client, depot_path):
    before = load_snapshot(depot_path)
    client.get("/metaplans")
    client.get("/staff")
    client.get("/stats")
    client.post(
        "/check", json={"metaPlanIds": [DAY0_PLAN], "team": []}
    )
    assert load_snapshot(depot_path) == before
