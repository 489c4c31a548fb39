# report_unit_test.py contains unit tests for metric report serialisation
import json

import numpy as np
import pandas as pd

from . import report
from .diffusion import DiffusionParams
from .graph import build_graph
from .metrics import DegreeSubset, ProbeEvaluation


def g1_evaluation():
    links = pd.DataFrame({"user": [0, 1], "item": [2, 0], "rank": [1.0, 1.5],
                          "position": [1, 2], "list_size": [1, 2]})
    return ProbeEvaluation.concat([ProbeEvaluation(links, skipped=1)])


def test_metric_reports(g1):
    params = DiffusionParams("SLD", macro_steps=2)
    reports = report.metric_reports(g1_evaluation(), g1, params, ("rs", "recall", "hits"), (1,),
                                    a=0.5 * np.log(5),
                                    hits_subsets=(DegreeSubset("user", max_degree=5),
                                                  DegreeSubset("user", min_degree=20)))
    by_name = {r.name: r for r in reports}
    assert sorted(by_name) == ["SLD_n2.hits.L1", "SLD_n2.recall.L1", "SLD_n2.rs"]

    rs = by_name["SLD_n2.rs"]
    assert rs.overall == np.mean([1.0, 0.75])
    assert rs.skipped == 1 and rs.evaluated == 2
    assert set(rs.bins["axis"]) == {"user", "item"}

    recall = by_name["SLD_n2.recall.L1"]
    assert recall.overall == 0.5
    assert "not all 2 users" in recall.notes[0]

    hits = by_name["SLD_n2.hits.L1"]
    assert hits.overall == 0.5
    assert hits.subsets == {"user_degree<=5": 0.5, "user_degree>=20": None}


def test_write(tmp_path, g1):
    params = DiffusionParams("RENBI", theta=-0.5)
    rs = report.metric_reports(g1_evaluation(), g1, params, ("rs",), (), a=0.5 * np.log(5))[0]
    csv_fn, json_fn = rs.write(str(tmp_path))
    assert csv_fn.endswith("RENBI_thetam0.5.rs.csv")

    frame = pd.read_csv(csv_fn)
    assert list(frame.columns) == ["metric", "algorithm", "label", "lambda", "macro_steps", "theta",
                                   "L", "overall", "skipped"] + report.BIN_COLUMNS
    assert (frame["theta"] == -0.5).all()
    with open(json_fn) as fh:
        written = json.load(fh)
    assert written["params"]["theta"] == -0.5
    assert written["overall"] == rs.overall
    assert len(written["bins"]) == len(rs.bins.index)


def test_empty_report(tmp_path):
    empty = report.MetricReport("rs", algorithm="MD", label="MD", params={})
    assert empty.to_frame().empty
    empty.write(str(tmp_path))
    assert (tmp_path / "MD.rs.json").exists()
