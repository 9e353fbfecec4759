# Copyright 2026 The hawkesq Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import hawkesq as hq


def base_params():
    return hq.HawkesParams(1.0, hq.ExcitationKernel.gamma_shape2(2.0, 2.0),
                           hq.ServiceDistribution.erlang(2))


def test_kernel_and_rate():
    p = base_params()
    assert p.kernel.branching_ratio == pytest.approx(0.5)
    assert p.arrival_rate == pytest.approx(2.0)


def test_arrivals_are_sorted_and_reproducible():
    a = hq.simulate_arrivals(base_params(), 2000.0, seed=3)
    b = hq.simulate_arrivals(base_params(), 2000.0, seed=3)
    assert np.all(np.diff(a["t"]) >= 0)
    assert np.array_equal(a["t"], b["t"])
    assert len(a["t"]) / 2000.0 == pytest.approx(2.0, rel=0.15)
    assert np.all(a["size"] > 0)


def test_mm1_workload():
    p = hq.HawkesParams(1.0, hq.ExcitationKernel.exponential(0.0, 1.0),
                        hq.ServiceDistribution.exponential())
    r = hq.simulate_queue(p, mu=2.0, horizon=1e5, seed=5)
    assert r["mean_w"] == pytest.approx(1.0, rel=0.08)


def test_special_functions():
    assert hq.lambert_w0(1.0) == pytest.approx(0.567143290409783873, rel=1e-14)
    assert hq.borel_mgf(0.5, 0.0) == pytest.approx(1.0)
    assert hq.borel_pmf(0.5, 1) == pytest.approx(math.exp(-0.5))
    with pytest.raises(hq.OutOfDomain):
        hq.borel_mgf(0.5, 1.0)


def test_constants():
    p = base_params()
    c = hq.solve_constants(1.0, p.kernel, p.service)
    assert c["theta"] > 0 and c["eta"] > 0
    with pytest.raises(hq.Unstable):
        hq.solve_constants(1.0, p.kernel, p.service, mu_lo=2.0)


def test_goliq_stays_in_bounds():
    cfg = hq.GoliqConfig()
    cfg.cycles = 20
    out = hq.run_goliq(cfg, base_params(), seed=7)
    assert len(out["cycles"]) == 20
    assert all(cfg.mu_lo <= c["mu"] <= cfg.mu_hi for c in out["cycles"])


def test_ngs_small_grid():
    res = hq.run_ngs([2.7, 2.9, 3.1], base_params(), hq.StaffingCost.quadratic(0.5, 0.5),
                     horizon=2000.0, replications=3, seed=2)
    assert res.mu_star in (2.7, 2.9, 3.1)
    assert len(res.grid) == 3
    with pytest.raises(hq.Unstable):
        hq.run_ngs([1.5], base_params(), hq.StaffingCost.quadratic(0.5, 0.5))


def test_config_errors():
    resolved = hq.resolve_config(json.dumps({"seed": 4}))
    assert resolved["seed"] == 4
    with pytest.raises(hq.ConfigError, match="goliq.cost.h1"):
        hq.resolve_config(json.dumps({"goliq": {"cost": {"h1": 1}}}))
    with pytest.raises(ValueError):
        hq.resolve_config(json.dumps({"stability": {"mu_lo": 2.0}}))
