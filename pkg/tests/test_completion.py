import itertools

import pytest

from sitrewrite.completion import (CompletionConfig, Equation, complete, cost_trend,
                                   critical_pairs, join)
from sitrewrite.oracle import reachable_states
from sitrewrite.ordering import Precedence, lpo_greater
from sitrewrite.rewrite import RewriteRule
from sitrewrite.terms import parse_term, positions, replace_at, subterm_at

P = parse_term
HANOI_PREC = Precedence(["3", "2", "1", "f", "bot"])


def rule(i, l, r):
    return RewriteRule(f"r{i}", P(l), P(r))


def pairs_of(eqs):
    return {frozenset((e.lhs, e.rhs)) for e in eqs}


def brute_force_ground_cps(a, b):
    """Ground overlaps: a's lhs occurring inside b's lhs, and vice versa."""
    out = set()
    for x, y in ((a, b), (b, a)):
        for p in positions(y.lhs):
            if subterm_at(y.lhs, p) == x.lhs:
                out.add(frozenset((replace_at(y.lhs, p, x.rhs), y.rhs)))
    return out


class TestCriticalPairs:
    def test_root_overlap(self):
        a = rule(1, "f(3,bot)", "f(2,bot)")
        b = rule(2, "f(3,bot)", "f(1,bot)")
        assert pairs_of(critical_pairs(a, b)) == {frozenset((P("f(2,bot)"), P("f(1,bot)")))}

    def test_self_overlap_is_trivial(self):
        a = rule(1, "off", "on")
        cps = critical_pairs(a, a)
        assert [(e.lhs, e.rhs) for e in cps] == [(P("on"), P("on"))]

    def test_disjoint_heads(self):
        assert critical_pairs(rule(1, "f(a)", "a"), rule(2, "g(b)", "b")) == []

    def test_variable_overlap(self):
        a = rule(1, "f(g(?x))", "?x")
        b = rule(2, "g(a)", "b")
        assert pairs_of(critical_pairs(a, b)) == {frozenset((P("f(b)"), P("a")))}

    def test_ground_against_brute_force(self, domain):
        _, enc = domain("hanoi", 3)
        rules = enc.rules.rules
        for a, b in itertools.product(rules, rules):
            got = pairs_of(critical_pairs(a, b))
            assert got == brute_force_ground_cps(a, b)


class TestComplete:
    def test_hanoi_two_disks(self):
        eqs = [("f(1,bot)", "f(2,bot)"), ("f(1,bot)", "f(3,bot)"), ("f(2,bot)", "f(3,bot)"),
               ("f(1,f(3,bot))", "f(2,f(3,bot))"), ("f(1,f(2,bot))", "f(3,f(2,bot))"),
               ("f(2,f(1,bot))", "f(3,f(1,bot))")]
        res = complete([(P(l), P(r)) for l, r in eqs], HANOI_PREC)
        assert res.saturated
        kept = res.rule_pairs()
        assert (P("f(2,f(1,bot))"), P("f(1,f(1,bot))")) in kept
        assert (P("f(3,f(1,bot))"), P("f(1,f(1,bot))")) in kept

    def test_empty(self):
        res = complete([], HANOI_PREC)
        assert res.saturated and res.rules == [] and res.equations == []

    def test_switches_single_rule(self):
        res = complete([(P("off"), P("on"))], Precedence(["off", "on", "f"]))
        assert res.saturated
        assert res.rule_pairs() == {(P("off"), P("on"))}

    def test_rules_decrease(self, domain):
        _, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        assert all(lpo_greater(res.prec, r.lhs, r.rhs) for r in res.rules)

    def test_unorientable_kept_as_equation(self):
        prec = Precedence(["f", "a", "b"])
        res = complete([(P("f(?x,?y)"), P("f(?y,?x)"))], prec)
        assert res.saturated
        assert res.rules == [] and len(res.equations) == 1

    def test_saturated_means_all_cps_join(self, domain):
        _, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        items = res.rules + res.equations
        for a, b in itertools.product(items, items):
            for cp in critical_pairs(a, b, res.prec):
                assert join(res, res.prec, cp.lhs, cp.rhs) is not None

    def test_soundness(self, domain):
        """Each kept rule relates terms denoting mutually reachable states."""
        theory, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        for r in res.rules:
            for t in enc.terms():
                for p in positions(t):
                    if subterm_at(t, p) == r.lhs:
                        u = replace_at(t, p, r.rhs)
                        assert enc.sigma(u) in reachable_states(theory, enc.sigma(t))

    def test_budget_exhausted_status(self, domain):
        _, enc = domain("river", 3)
        res = complete(list(enc.rules.rules) + list(enc.rules.equations), enc.precedence,
                       CompletionConfig(max_cps=20))
        assert res.status == "budget-exhausted"
        assert res.stats["processed"] <= 21

    def test_stats_are_integers(self, domain):
        _, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        for key in ("cps_generated", "cps_kept", "rewrite_ops"):
            assert isinstance(res.stats[key], int)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            CompletionConfig(max_cps=0)
        with pytest.raises(ValueError):
            CompletionConfig(max_generated=-1)


class TestJoin:
    def test_hanoi_meets_at_peg_one(self, domain):
        _, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        trace = join(res, enc.precedence, P("f(2,f(2,f(2,bot)))"), P("f(3,f(3,f(3,bot)))"))
        assert trace.meet == P("f(1,f(1,f(1,bot)))")
        assert trace.replays()

    def test_same_term(self, domain):
        _, enc = domain("hanoi", 3)
        res = complete(enc.rules.rules, enc.precedence)
        t = P("f(1,f(1,f(1,bot)))")
        trace = join(res, enc.precedence, t, t)
        assert trace.left == [] and trace.right == [] and trace.meet == t

    def test_switches_valley(self, domain):
        _, enc = domain("switches", 2)
        res = complete(enc.rules.rules, enc.precedence)
        trace = join(res, enc.precedence, P("f(off,on)"), P("f(on,off)"))
        assert trace.meet == P("f(on,on)") and trace.replays()

    def test_wrong_precedence(self, domain):
        _, enc = domain("hanoi", 2)
        res = complete(enc.rules.rules, enc.precedence)
        with pytest.raises(ValueError):
            join(res, Precedence(["1", "2", "3", "f", "bot"]), P("f(1,bot)"), P("f(1,bot)"))

    @pytest.mark.parametrize("name,n,kw", [("switches", 3, {}), ("switches", 3, {"variant": "indicator"}),
                                           ("hanoi", 2, {}), ("hanoi", 3, {})])
    def test_joinable_iff_reachable(self, domain, name, n, kw):
        theory, enc = domain(name, n, **kw)
        res = complete(enc.rules.rules, enc.precedence)
        assert res.saturated
        for s, t in itertools.product(enc.terms(), enc.terms()):
            trace = join(res, enc.precedence, s, t)
            reachable = enc.sigma(t) in reachable_states(theory, enc.sigma(s))
            assert (trace is not None) == reachable
            if trace is not None:
                assert trace.replays()

    def test_reversed_precedence_normal_form(self, domain):
        """With 1 > 2 > 3 everything normalizes towards peg 3 instead."""
        _, enc = domain("hanoi", 3)
        prec = Precedence(["1", "2", "3", "f", "bot"])
        res = complete(enc.rules.rules, prec)
        trace = join(res, prec, P("f(2,f(2,f(2,bot)))"), P("f(1,f(1,f(1,bot)))"))
        assert trace.meet == P("f(3,f(3,f(3,bot)))")


class TestCostTrend:
    def test_exact_quadratic(self):
        ns = [2, 3, 4, 5, 6]
        fit = cost_trend(ns, [3 * n * n + 1 for n in ns], max_degree=2)
        assert fit["degree"] == 2
        assert fit["r2"] == pytest.approx(1.0)
        assert fit["coefficients"] == pytest.approx([3, 0, 1], abs=1e-8)

    def test_degree_capped_by_points(self):
        assert cost_trend([1, 2], [5, 7])["degree"] == 1

    def test_hanoi_counts_are_quadratic(self, domain):
        ns = [2, 3, 4, 5, 6]
        ops = [complete(domain("hanoi", n)[1].rules.rules, domain("hanoi", n)[1].precedence)
               .stats["rewrite_ops"] for n in ns]
        fit = cost_trend(ns, ops, max_degree=2)
        assert fit["r2"] >= 0.95
        assert fit["coefficients"][0] > 0
