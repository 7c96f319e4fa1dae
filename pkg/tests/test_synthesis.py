import itertools

import pytest

from sitrewrite.rewrite import RuleSet
from sitrewrite.synthesis import (build_r0, build_r1, build_r2, check_action_f_limited,
                                  check_f_expressive, check_f_limited, check_uniform,
                                  check_weakly_f_expressive, contexts_at, fluent_subsets,
                                  is_action_support, lgg, r1_choices, sufficient_condition_check,
                                  necessary_condition_check)
from sitrewrite.terms import HOLE, apply_subst, const, match_lhs, parse_term, positions, replace_at, subterm_at
from sitrewrite.theory import ActionId, check_representation

P = parse_term
ON, OFF = const("on"), const("off")

SMALL = [("switches", 3, {}), ("switches", 3, {"variant": "indicator"}),
         ("switches", 3, {"variant": "per_switch"}), ("hanoi", 2, {}), ("hanoi", 3, {}),
         ("hanoi", 3, {"variant": "flat"}), ("river", 3, {}), ("blocks", 3, {})]


def support_oracle(theory, enc, t):
    """Direct reading: every occurrence context admits some replacement doing some action."""
    members = set(enc.terms())
    fillers = {subterm_at(s, p) for s in members for p in positions(s)}
    for s in members:
        for p in positions(s):
            if subterm_at(s, p) != t:
                continue
            state = enc.sigma(s)
            if not any(replace_at(s, p, u) in members
                       and enc.sigma(replace_at(s, p, u)) in {n for _, n in theory.transitions(state)}
                       for u in fillers):
                return False
    return True


def action_limited_oracle(theory, a, fprime):
    states = theory.states()
    for s in states:
        n = theory.do(a, s)
        if n is not None and any(n[p] != s[p] for p in theory.fluents if p not in fprime):
            return False
    for s, t in itertools.product(states, states):
        if all(s[p] == t[p] for p in fprime):
            ns, nt = theory.do(a, s), theory.do(a, t)
            if (ns is None) != (nt is None):
                return False
            if ns is not None and any(ns[p] != nt[p] for p in fprime):
                return False
    return True


class TestBuildR0:
    def test_switches_count(self, domain):
        th, enc = domain("switches", 3)
        assert len(build_r0(th, enc).rules) == 24 == 3 * 2 ** 3

    def test_empty_theory(self, domain):
        from sitrewrite.theory import Encoding, GroundTheory
        from sitrewrite.ordering import Precedence
        from sitrewrite.terms import Signature
        th = GroundTheory({"b": ("0",)}, [], lambda a, s: None)
        enc = Encoding("one", Signature([("zero", 0)]), Precedence(["zero"]), RuleSet(), th,
                       lambda t: {"b": "0"} if t == const("zero") else None,
                       lambda: [const("zero")])
        assert build_r0(th, enc).rules == ()

    def test_hanoi_two_counts_transitions(self, domain):
        th, enc = domain("hanoi", 2)
        transitions = sum(1 for s in th.states() for a in th.actions if th.do(a, s) is not None)
        assert len(build_r0(th, enc).rules) == transitions

    def test_rules_are_whole_terms(self, domain):
        th, enc = domain("hanoi", 2)
        members = set(enc.terms())
        assert all(r.lhs in members and r.rhs in members for r in build_r0(th, enc).rules)


class TestBuildR1:
    def test_switches(self, domain):
        th, enc = domain("switches", 3)
        assert {(r.lhs, r.rhs) for r in build_r1(th, enc).rules} == {(OFF, ON), (ON, OFF)}

    def test_indicator_keeps_whole_terms(self, domain):
        th, enc = domain("switches", 3, variant="indicator")
        members = set(enc.terms())
        rules = build_r1(th, enc).rules
        assert len(rules) == 24
        assert all(r.lhs in members for r in rules)

    def test_hanoi_nested_matches_domain_rules(self, domain):
        th, enc = domain("hanoi", 3)
        got = {(r.lhs, r.rhs) for r in build_r1(th, enc).rules}
        assert got == {(r.lhs, r.rhs) for r in enc.rules.rules}
        assert len(got) == 18
        assert (P("f(1,bot)"), P("f(2,bot)")) in got

    def test_chosen_supports_are_supports(self, domain):
        th, enc = domain("hanoi", 3)
        for c in r1_choices(th, enc):
            assert support_oracle(th, enc, c.support)
            assert subterm_at(c.term, c.position) == c.support


class TestBuildR2:
    def test_switches_whole_terms_lift(self, domain):
        th, enc = domain("switches", 3)
        r2 = build_r2(th, enc, build_r0(th, enc))
        assert len(r2.rules) == 6 == 2 * 3
        assert {str(r) for r in r2.rules} >= {"f(off,?x1,?x2) -> f(on,?x1,?x2)",
                                              "f(?x1,?x2,on) -> f(?x1,?x2,off)"}

    def test_already_general(self, domain):
        th, enc = domain("switches", 3)
        r1 = build_r1(th, enc)
        assert {(r.lhs, r.rhs) for r in build_r2(th, enc, r1).rules} == \
            {(r.lhs, r.rhs) for r in r1.rules}

    def test_blocks_lifts_over_contents(self, domain):
        th, enc = domain("blocks", 3)
        r2 = build_r2(th, enc, build_r0(th, enc))
        assert any(not r.lhs.ground for r in r2.rules)

    def test_instances_stay_in_input(self, domain):
        """Every instance of a lifted rule at a member term is an input rule."""
        th, enc = domain("hanoi", 3)
        r0 = build_r0(th, enc)
        pairs = {(r.lhs, r.rhs) for r in r0.rules}
        for r in build_r2(th, enc, r0).rules:
            for t in enc.terms():
                theta = match_lhs(r.lhs, t)
                if theta is not None:
                    assert (t, apply_subst(r.rhs, theta)) in pairs

    def test_lgg(self):
        table = {}
        g = lgg(P("f(a,g(b),a)"), P("f(c,g(d),c)"), table)
        assert g.args[0] == g.args[2] and g.args[0].is_var
        assert g.args[1].head == "g" and g.args[1].args[0].is_var


class TestSynthesizedSystemsRepresent:
    @pytest.mark.parametrize("name,n,kw", SMALL)
    def test_all_levels_represent(self, domain, name, n, kw):
        th, enc = domain(name, n, **kw)
        r0 = build_r0(th, enc)
        r1 = build_r1(th, enc)
        r2 = build_r2(th, enc, r1)
        for rules in (r0, r1, r2):
            assert check_representation(th, enc.with_rules(rules)).passed
        assert len(r2.rules) <= len(r1.rules) <= len(r0.rules)


class TestActionSupport:
    def test_switch_constant(self, domain):
        th, enc = domain("switches", 3)
        res = is_action_support(th, enc, OFF)
        assert res.ok and len(res.certificates) == 12

    def test_whole_term(self, domain):
        th, enc = domain("switches", 3)
        assert is_action_support(th, enc, P("f(off,off,on)")).ok

    def test_hanoi_peg_constant(self, domain):
        th, enc = domain("hanoi", 3)
        res = is_action_support(th, enc, const("1"))
        assert not res.ok and res.counterexample is not None
        assert support_oracle(th, enc, const("1")) is False

    def test_certificates_are_sound(self, domain):
        th, enc = domain("hanoi", 3)
        res = is_action_support(th, enc, P("f(1,bot)"))
        assert res.ok
        for c in res.certificates:
            filled = replace_at(c.context, _hole(c.context), c.replacement)
            assert c.term == replace_at(c.context, _hole(c.context), c.support)
            assert enc.sigma(filled) == th.do(c.action, enc.sigma(c.term))

    @pytest.mark.parametrize("name,n,kw", [("switches", 2, {"variant": "indicator"}), ("hanoi", 2, {}),
                                           ("blocks", 2, {})])
    def test_against_oracle(self, domain, name, n, kw):
        th, enc = domain(name, n, **kw)
        subs = {subterm_at(s, p) for s in enc.terms() for p in positions(s)}
        for t in subs:
            assert is_action_support(th, enc, t).ok == support_oracle(th, enc, t), t


def _hole(ctx):
    return next(p for p in positions(ctx) if subterm_at(ctx, p) == HOLE)


class TestLimitedExpressive:
    def test_switches_slot(self, domain):
        _, enc = domain("switches", 3)
        ctx = contexts_at(enc, (2,))
        assert len(ctx) == 4
        assert check_f_limited(enc, [ON, OFF], {"switch2"}, ctx).ok
        assert check_f_expressive(enc, [ON, OFF], {"switch2"}, ctx).ok

    def test_empty_subset_not_limited(self, domain):
        _, enc = domain("switches", 3)
        res = check_f_limited(enc, [ON, OFF], set(), contexts_at(enc, (2,)))
        assert not res.ok and res.witness[3] == "switch2"

    def test_full_subset_vacuous(self, domain):
        th, enc = domain("hanoi", 3)
        terms = {subterm_at(s, p) for s in enc.terms() for p in positions(s)}
        assert check_f_limited(enc, terms, set(th.fluents)).ok

    def test_indicator_slot_is_limited_literally(self, domain):
        """The indicator lives in the context, so a fixed context cannot see it change."""
        _, enc = domain("switches", 3, variant="indicator")
        assert check_f_limited(enc, [ON, OFF], {"switch2"}, contexts_at(enc, (2,))).ok

    def test_indicator_slot_with_z_not_expressive(self, domain):
        """With z in the subset, the all-on state agrees with f(on,[],on,false)
        outside it, yet no filler of that context reaches it."""
        _, enc = domain("switches", 3, variant="indicator")
        ctx = contexts_at(enc, (2,))
        assert check_f_limited(enc, [ON, OFF], {"switch2", "z"}, ctx).ok
        res = check_f_expressive(enc, [ON, OFF], {"switch2", "z"}, ctx)
        assert not res.ok
        assert res.witness[0] == replace_at(P("f(on,on,on,false)"), (2,), HOLE)
        assert dict(res.witness[2]) == {"switch1": "on", "switch2": "on", "switch3": "on", "z": "true"}

    def test_weakly_expressive(self, domain):
        _, enc = domain("switches", 3)
        ctx = contexts_at(enc, (2,))
        res = check_weakly_f_expressive(enc, [ON, OFF], {"switch2"}, ctx)
        assert res.ok and res.witness[0] in ctx

    def test_weakly_singleton(self, domain):
        _, enc = domain("switches", 3)
        assert not check_weakly_f_expressive(enc, [ON], {"switch2"}).ok

    def test_weakly_empty_subset(self, domain):
        _, enc = domain("switches", 3)
        assert not check_weakly_f_expressive(enc, [ON, OFF], set()).ok


class TestActionLimited:
    def test_switch(self, domain):
        th, _ = domain("switches", 3)
        assert check_action_f_limited(th, ActionId("turn_on", ("2",)), {"switch2"}).ok

    def test_hanoi_larger_disks_depend_on_smaller(self, domain):
        th, _ = domain("hanoi", 3)
        res = check_action_f_limited(th, ActionId("move", ("disk1", "1", "3")), {"disk1"})
        assert not res.ok and res.witness[0] == "depends"
        assert not check_action_f_limited(th, ActionId("move", ("disk2", "1", "3")), {"disk2"}).ok
        # nothing sits on the smallest disk
        assert check_action_f_limited(th, ActionId("move", ("disk3", "1", "3")), {"disk3"}).ok

    def test_full_subset(self, domain):
        th, _ = domain("river", 3)
        assert all(check_action_f_limited(th, a, set(th.fluents)).ok for a in th.actions)

    @pytest.mark.parametrize("name,n,kw", [("hanoi", 2, {}), ("switches", 2, {"variant": "indicator"})])
    def test_against_oracle(self, domain, name, n, kw):
        th, _ = domain(name, n, **kw)
        for a in th.actions:
            for f in fluent_subsets(th):
                assert check_action_f_limited(th, a, f).ok == action_limited_oracle(th, a, f)


class TestUniform:
    def test_switch_constant(self, domain):
        _, enc = domain("switches", 3)
        assert check_uniform(enc, OFF).ok

    def test_absent_term(self, domain):
        _, enc = domain("switches", 3)
        assert check_uniform(enc, P("g(a)")).ok

    def test_indicator_not_uniform(self, domain):
        _, enc = domain("switches", 3, variant="indicator")
        assert not check_uniform(enc, OFF).ok

    def test_river_person_list(self, domain):
        """Whole-term contexts fix every other slot, so bank and bridge slots agree."""
        _, enc = domain("river", 3)
        assert check_uniform(enc, P("g(1,bot)")).ok


class TestSubtermConditions:
    @pytest.mark.parametrize("name,n,kw", [("switches", 2, {}), ("switches", 3, {}),
                                           ("switches", 3, {"variant": "indicator"}),
                                           ("hanoi", 2, {}), ("hanoi", 3, {})])
    def test_checks_hold(self, domain, name, n, kw):
        th, enc = domain(name, n, **kw)
        six = sufficient_condition_check(th, enc)
        assert six["ok"] and six["constructed"] == six["instances"] > 0
        seven = necessary_condition_check(th, enc)
        assert seven["ok"] and seven["instances"] > 0
