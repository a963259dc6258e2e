"""Smoke test for the cacheroute Python module.

Build and install first:  pip install maturin && maturin develop -m crates/py/Cargo.toml
"""

import math

import cacheroute as cr


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    q = cr.zipf_popularity(2, 1.0)
    assert close(q[0], 2 / 3) and close(q[1], 1 / 3)

    t, hits = cr.che_solve([2.0, 1.0], 1)
    x = (math.sqrt(5) - 1) / 2
    assert close(hits[0], 1 - x * x) and close(hits[1], 1 - x)

    pi = cr.alpha_two_lru_stationary(0.2, 0.5, 0.3, 1.0)
    assert all(close(a, b) for a, b in zip(pi, (0.5, 0.0, 0.3, 0.2)))
    assert close(sum(cr.alpha_two_lru_metrics(0.3, 0.4, 0.3, 0.5)), 1.0, 1e-12)

    assert close(cr.optimal_split_p(0.5, 8.0, 0.5), 0.5)
    assert close(cr.mm1_expected_delay(0.5, 0.25), 4.0)
    try:
        cr.mm1_expected_delay(0.5, 0.5)
    except (ValueError, RuntimeError):
        pass
    else:
        raise AssertionError("unstable queue accepted")

    rates = [0.2 * p for p in cr.zipf_popularity(1000, 0.8)]
    rates = [5 * r for r in rates]
    alpha, d_alpha = cr.optimize_alpha(rates, 100, 1.0, 8.0, 0.5)
    size, d_size = cr.optimize_id_cache_size(rates, 100, 1.0, 8.0, 0.5)
    assert 0.0 <= alpha <= 1.0 and 1 <= size <= 1000 and d_size <= d_alpha

    lru = cr.LruCache(2, 10)
    assert [lru.access(f) for f in (1, 2, 3, 1)] == ["miss"] * 4
    assert lru.contents() == [1, 3] and len(lru) == 2

    two = cr.TwoLruCache(10, 5, 100, alpha=0.0, seed=3)
    assert two.access(7) == "deflect" and two.access(7) == "miss" and two.access(7) == "hit"
    assert two.mirror_consistent()

    toml = 'seed = 4\narrivals = 20000\n[policy]\nkind = "optimal"\n'
    report = cr.run_scenario(toml)
    assert report["hits"] + report["misses"] + report["deflects"] + report["uncached"] == 20000
    assert abs(report["mean_delay"] - cr.analytic_optimum(toml)) / report["mean_delay"] < 0.05
    assert report["csv"].splitlines()[0].startswith("window_end_arrivals,mean_delay")
    assert cr.run_scenario(toml) == report
    lru_report = cr.run_scenario(toml, ["policy.kind=lru"])
    assert lru_report["policy"] == "lru" and lru_report["mean_delay"] > report["mean_delay"]

    try:
        cr.run_scenario("seed = 1\nbogus = 2\n")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown key accepted")

    assert {p[0] for p in cr.presets()} == {"paper-centralized", "paper-dcr", "paper-two-lru"}
    print("smoke test passed")


if __name__ == "__main__":
    main()
