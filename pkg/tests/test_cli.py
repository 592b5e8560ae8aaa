import json

import pytest

from eigenposet.cli import main
from eigenposet.jobs import (
    JobSpec,
    battery,
    e8_formula,
    load_suite,
    report_to_json,
    report_tsv_lines,
    run,
    strip_volatile,
)
from eigenposet.refl import data_dir


def test_jobspec_round_trip():
    job = JobSpec(group="gmpn:2,1,2", gamma="scalar:4:1", zeta="4:1",
                  tasks=("homology", "verify-webb"), expect_count=3,
                  out="report.json")
    assert JobSpec.parse(job.format()) == job


def test_run_with_scalar_gamma_coset():
    job = JobSpec(group="gmpn:2,1,2", gamma="scalar:4:1", zeta="4:1",
                  tasks=("verify-webb", "verify-corollary"))
    report = run(job)
    assert [t["verdict"] for t in report["tasks"]] == ["PASS", "PASS"]
    # off the identity coset the formula comparison is skipped with a notice
    payload = report["tasks"][1]["payload"]
    assert "formula" not in payload["counts"]
    assert any("identity coset" in n for n in payload.get("notes", []))


def test_jobspec_rejects_bad_input():
    with pytest.raises(ValueError):
        JobSpec(tasks=("no-such-task",))
    with pytest.raises(ValueError):
        JobSpec(zeta="four")


def test_run_verify_us_sym3():
    report = run(JobSpec(group="sym:3", zeta="1:0", tasks=("verify-us",)))
    assert report["tasks"][0]["verdict"] == "PASS"


def test_run_webb_and_corollary_g212():
    job = JobSpec(group="gmpn:2,1,2", zeta="4:1",
                  tasks=("verify-webb", "verify-corollary"), expect_count=2)
    report = run(job)
    assert [t["verdict"] for t in report["tasks"]] == ["PASS", "PASS"]


def test_run_is_deterministic():
    job = JobSpec(group="sym:3", zeta="3:1",
                  tasks=("poset", "homology", "characters", "verify-corollary"))
    a = strip_volatile(run(job))
    b = strip_volatile(run(job))
    assert report_to_json(a) == report_to_json(b)


def test_expect_count_mismatch_fails():
    job = JobSpec(group="sym:3", zeta="3:1", tasks=("verify-corollary",),
                  expect_count=99)
    report = run(job)
    task = report["tasks"][0]
    assert task["verdict"] == "FAIL"
    assert task["payload"]["witness"]["computed"] == 2


def test_budget_exceeded_is_skipped():
    job = JobSpec(group="sym:4", zeta="1:0", tasks=("poset",),
                  budget_elements=5)
    report = run(job)
    assert report["tasks"][0]["verdict"] == "SKIPPED"
    assert "budget" in report["tasks"][0]["payload"]["reason"]


def test_degenerate_instance_is_skipped():
    # a cyclic group has a single eigenspace at an absent eigenvalue order
    job = JobSpec(group="gmpn:5,5,1", zeta="3:1", tasks=("verify-corollary",))
    report = run(job)
    assert report["tasks"][0]["verdict"] == "SKIPPED"


def test_e8_formula_values():
    assert e8_formula(3)["count"] == 7745920
    assert e8_formula(3)["stabilizer_quotient"] == "ST32"
    assert e8_formula(4)["stabilizer_quotient"] == "ST31"
    assert e8_formula(3)["sphere_dim"] == 3
    assert e8_formula(4)["eigenspace_dim"] == 4
    payload = e8_formula(4)
    # the printed factors multiply out to the reported count
    prod = 1
    for f in payload["degree_factors"] + payload["codegree_factors"]:
        prod *= f
    assert payload["count"] == prod
    assert payload["degree_factors"] == [2, 14, 18, 30]
    assert payload["codegree_factors"] == [1, 13, 17, 29]


def test_empty_battery():
    agg = battery([])
    assert agg["ok"] and agg["suite_size"] == 0


def test_battery_exit_contract(tmp_path):
    jobs = [
        JobSpec(group="sym:3", zeta="3:1", tasks=("verify-corollary",),
                expect_count=2),
        JobSpec(zeta="3:1", tasks=("e8-formula",), expect_count=7745920),
    ]
    agg = battery(jobs, workers=2)
    assert agg["ok"]
    bad = battery([JobSpec(zeta="3:1", tasks=("e8-formula",), expect_count=1)])
    assert not bad["ok"]


def test_quick_suite_file_parses():
    jobs = load_suite(data_dir() / "battery_quick.jobs")
    assert len(jobs) >= 4
    assert all(isinstance(j, JobSpec) for j in jobs)


def test_tsv_lines(tmp_path):
    agg = battery([JobSpec(zeta="3:1", tasks=("e8-formula",))])
    lines = report_tsv_lines(agg)
    assert lines[0].startswith("index\t")
    assert any("e8-formula\tPASS" in ln for ln in lines)


def test_cli_poset_subcommand(capsys):
    rc = main(["poset", "--group", "sym:3", "--zeta", "1:0"])
    out = capsys.readouterr().out
    assert rc == 0
    report = json.loads(out)
    assert report["tasks"][0]["payload"]["sizes"]["full"] == 5


def test_cli_homology_with_matrices_and_figure(tmp_path):
    out = tmp_path / "rep.json"
    rc = main(["homology", "--group", "sym:3", "--zeta", "1:0",
               "--emit-matrices", "--out", str(out),
               "--figures", str(tmp_path / "figs")])
    assert rc == 0
    report = json.loads(out.read_text())
    payload = report["tasks"][0]["payload"]
    assert payload["pointed"]["betti"] == {"1": 2}
    assert payload["matrices"]  # sparse triplet lines
    assert (tmp_path / "figs" / "betti.png").exists()


def test_cli_character_subcommand(capsys):
    rc = main(["character", "--group", "gmpn:2,1,2", "--zeta", "2:1"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert "lefschetz" in report["tasks"][0]["payload"]


def test_cli_verify_exit_codes(capsys):
    rc = main(["verify", "verify-us", "--group", "sym:3"])
    capsys.readouterr()
    assert rc == 0
    rc = main(["verify", "verify-corollary", "--group", "sym:3",
               "--zeta", "3:1", "--expect-count", "99"])
    capsys.readouterr()
    assert rc == 1


def test_cli_battery_quick(tmp_path):
    out = tmp_path / "quick.json"
    rc = main(["battery", "quick", "--out", str(out),
               "--figures", str(tmp_path / "figs"), "--jobs", "2"])
    assert rc == 0
    agg = json.loads(out.read_text())
    assert agg["ok"] and agg["summary"]["FAIL"] == 0
    assert (tmp_path / "quick.tsv").exists()
    assert (tmp_path / "figs" / "battery.png").exists()


def test_cli_e8_formula(capsys):
    rc = main(["e8-formula", "--m", "3", "--expect-count", "7745920"])
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tasks"][0]["payload"]["count"] == 7745920


def test_reports_identical_across_processes(tmp_path):
    import os
    import subprocess
    import sys

    out = tmp_path / "rep.json"
    outs = []
    for seed in ("1", "31337"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        subprocess.run(
            [sys.executable, "-m", "eigenposet.cli", "verify",
             "verify-corollary", "verify-mv", "--group", "gmpn:2,1,2",
             "--zeta", "4:1", "--out", str(out)],
            check=True, env=env)
        data = json.loads(out.read_text())
        data.pop("timestamp")
        data.pop("timings")
        outs.append(json.dumps(data, sort_keys=True))
    assert outs[0] == outs[1]


def test_data_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("EIGENPOSET_DATA_DIR", str(tmp_path))
    import eigenposet.refl as refl

    assert refl.data_dir() == tmp_path
