import pytest
from hypothesis import given
from hypothesis import strategies as st

from sitrewrite.errors import ConstraintViolated, NoAction, TermNotInT
from sitrewrite.rewrite import RewriteRule, RuleKind, RuleSet, applicable_steps, make_step, successors
from sitrewrite.terms import parse_term
from sitrewrite.theory import (ActionId, FluentAssignment, GroundTheory, check_invertible,
                               check_representation, chi_hat, find_term, label_action, phi_hat)

P = parse_term


def toggle_theory():
    """One boolean fluent and a single flip action."""
    def do(a, s):
        return s.updated(b="1" if s["b"] == "0" else "0")
    return GroundTheory({"b": ("0", "1")}, [ActionId("flip")], do)


class TestActionId:
    def test_str_and_parse(self):
        a = ActionId("move", ("disk2", "1", "3"))
        assert str(a) == "move(disk2,1,3)"
        assert ActionId.parse("move(disk2, 1, 3)") == a

    def test_no_arguments(self):
        assert ActionId.parse("flip") == ActionId("flip")
        assert str(ActionId("flip")) == "flip()"

    def test_ordering(self):
        assert sorted([ActionId("b"), ActionId("a", ("2",)), ActionId("a", ("1",))])[0] == \
            ActionId("a", ("1",))

    def test_malformed(self):
        with pytest.raises(ValueError):
            ActionId.parse("3bad(")


class TestFluentAssignment:
    def test_hashable_and_equal_to_dict(self):
        a = FluentAssignment({"x": 1, "y": 2})
        assert a == {"x": 1, "y": 2}
        assert hash(a) == hash(FluentAssignment({"y": 2, "x": 1}))

    def test_immutable(self):
        a = FluentAssignment({"x": 1})
        with pytest.raises(AttributeError):
            a.x = 2
        assert a.updated(x=3) == {"x": 3} and a["x"] == 1


class TestGroundTheory:
    def test_states_and_transitions(self):
        th = toggle_theory()
        assert len(th.states()) == 2
        s = th.assignment(b="0")
        assert th.transitions(s) == ((ActionId("flip"), th.assignment(b="1")),)

    def test_assignment_must_be_total(self):
        th = toggle_theory()
        with pytest.raises(ValueError):
            th.assignment()
        with pytest.raises(ValueError):
            th.assignment(b="2")

    def test_require_state(self, domain):
        th, _ = domain("switches", 2, variant="indicator")
        with pytest.raises(ConstraintViolated):
            th.require_state({"switch1": "on", "switch2": "on", "z": "false"})

    def test_do_outside_states(self, domain):
        th, _ = domain("switches", 2, variant="indicator")
        bad = FluentAssignment({"switch1": "on", "switch2": "on", "z": "false"})
        assert th.do(th.actions[0], bad) is None

    def test_no_actions(self):
        th = GroundTheory({"b": ("0",)}, [], lambda a, s: None)
        assert th.transitions(th.states()[0]) == ()


class TestPhiHat:
    def test_switches(self, domain):
        _, enc = domain("switches", 3)
        assert phi_hat(enc, "switch2", P("f(on,off,on)")) == "off"

    def test_hanoi_largest_disk(self, domain):
        _, enc = domain("hanoi", 2)
        assert phi_hat(enc, "disk1", P("f(2,f(1,bot))")) == 2

    def test_river_crossing(self, domain):
        _, enc = domain("river", 5)
        t = P("f(g(2,g(3,bot)),bot,g(4,bot),g(5,bot),g(1,bot))")
        assert phi_hat(enc, "person4", t) == "bridge2"
        assert phi_hat(enc, "person1", t) == "right"

    def test_not_in_T(self, domain):
        _, enc = domain("switches", 3)
        with pytest.raises(TermNotInT):
            phi_hat(enc, "switch1", P("f(on,on)"))

    @given(st.lists(st.sampled_from(["on", "off"]), min_size=3, max_size=3))
    def test_switches_positional(self, bits):
        from sitrewrite.domains import make_switches
        _, enc = make_switches(3)
        t = P(f"f({','.join(bits)})")
        assert [phi_hat(enc, f"switch{i}", t) for i in (1, 2, 3)] == bits


class TestChiHat:
    def test_basic_always_true(self, domain):
        _, enc = domain("switches", 3)
        assert all(chi_hat(enc, t) for t in enc.terms())
        assert len(enc.terms()) == 8

    def test_indicator(self, domain):
        _, enc = domain("switches", 2, variant="indicator")
        assert chi_hat(enc, P("f(on,on,true)"))
        assert not chi_hat(enc, P("f(on,on,false)"))
        assert not chi_hat(enc, P("f(on,off,true)"))

    def test_river_two_on_a_bridge_slot(self, domain):
        _, enc = domain("river", 3)
        assert not chi_hat(enc, P("f(bot,bot,bot,g(1,g(2,bot)),g(3,bot))"))
        assert chi_hat(enc, P("f(bot,bot,g(1,bot),g(2,bot),g(3,bot))"))

    def test_ill_formed(self, domain):
        _, enc = domain("hanoi", 2)
        assert not chi_hat(enc, P("f(4,f(1,bot))"))
        assert not chi_hat(enc, P("f(?x,bot)"))


class TestFindTerm:
    def test_switches(self, domain):
        th, enc = domain("switches", 3)
        assert find_term(enc, th.assignment(switch1="on", switch2="off", switch3="on")) == \
            P("f(on,off,on)")

    def test_constraint_violated(self, domain):
        _, enc = domain("switches", 2, variant="indicator")
        assert find_term(enc, {"switch1": "on", "switch2": "on", "z": "false"}) is None

    def test_hanoi(self, domain):
        _, enc = domain("hanoi", 3)
        assert find_term(enc, {"disk1": 3, "disk2": 3, "disk3": 3}) == P("f(3,f(3,f(3,bot)))")

    @pytest.mark.parametrize("name,n,kw", [("river", 3, {}), ("blocks", 3, {}),
                                           ("switches", 3, {"variant": "per_switch"})])
    def test_round_trip(self, domain, name, n, kw):
        th, enc = domain(name, n, **kw)
        for s in th.states():
            t = find_term(enc, s)
            assert enc.in_T(t) and enc.sigma(t) == s


class TestLabelAction:
    def test_switch_position(self, domain):
        _, enc = domain("switches", 3)
        rule = enc.rules["turn_on"]
        assert str(label_action(enc, make_step(rule, P("f(on,off,on)"), (2,)))) == "turn_on(2)"

    def test_hanoi_inner_step(self, domain):
        th, enc = domain("hanoi", 2)
        t = P("f(2,f(1,bot))")
        (step,) = [s for s in applicable_steps(enc.rules, t)
                   if s.lhs == P("f(1,bot)") and s.rhs == P("f(3,bot)")]
        a = label_action(enc, step)
        assert str(a) == "move(disk2,1,3)"
        # brute force: the only action whose effect matches the fluent diff
        before, after = enc.sigma(step.before), enc.sigma(step.after)
        assert [x for x in th.actions if th.do(x, before) == after] == [a]

    def test_rearrangement_has_no_action(self, domain):
        _, enc = domain("river", 3)
        t = P("f(g(1,g(2,g(3,bot))),bot,bot,bot,bot)")
        step = next(s for s in successors(enc.rules, t) if s.kind is RuleKind.REARRANGEMENT)
        with pytest.raises(NoAction):
            label_action(enc, step)

    @pytest.mark.parametrize("name,n,kw", [("switches", 3, {}), ("switches", 3, {"variant": "indicator"}),
                                           ("hanoi", 3, {}), ("river", 3, {}), ("blocks", 3, {})])
    def test_every_action_step_is_labelled(self, domain, name, n, kw):
        th, enc = domain(name, n, **kw)
        for t in enc.terms():
            for step in applicable_steps(enc.rules, t):
                a = label_action(enc, step)
                assert th.do(a, enc.sigma(t)) == enc.sigma(step.after)


class TestRepresentation:
    def test_switches_all_pass(self, domain):
        th, enc = domain("switches", 3)
        report = check_representation(th, enc)
        assert report.passed
        assert report.lines() == ["eq1 surjectivity PASS", "eq2 closure PASS",
                                  "eq3 rearrangement-equivalence PASS",
                                  "eq4 action-soundness PASS", "eq5 action-completeness PASS"]

    def test_hanoi_three(self, domain):
        th, enc = domain("hanoi", 3)
        assert check_representation(th, enc).passed

    def test_dropping_a_rule_breaks_completeness(self, domain):
        th, enc = domain("hanoi", 3)
        broken = enc.with_rules(RuleSet(enc.rules.rules[1:], enc.rules.equations))
        report = check_representation(th, broken)
        assert [r.passed for r in report.results] == [True, True, True, True, False]
        assert report[5].witness is not None
        assert "FAIL witness:" in report[5].line()

    def test_wrong_action_breaks_soundness(self, domain):
        th, enc = domain("hanoi", 2)
        bogus = RewriteRule("bogus", P("f(1,f(1,bot))"), P("f(2,f(2,bot))"))
        report = check_representation(th, enc.with_rules(RuleSet(enc.rules.rules + (bogus,))))
        assert not report[4].passed

    def test_leaving_T_breaks_closure(self, domain):
        th, enc = domain("switches", 2, variant="indicator")
        bad = RewriteRule("bad", P("true"), P("false"))
        report = check_representation(th, enc.with_rules(RuleSet(enc.rules.rules + (bad,))))
        assert not report[2].passed

    def test_missing_rearrangements(self, domain):
        th, enc = domain("river", 3)
        report = check_representation(th, enc.with_rules(RuleSet(enc.rules.rules)))
        assert not report[3].passed
        assert report[3].witness[0] == "unconnected preimages"

    def test_state_changing_rearrangement(self, domain):
        th, enc = domain("switches", 2)
        e = RewriteRule("e", P("f(?x,?y)"), P("f(?y,?x)"), RuleKind.REARRANGEMENT)
        report = check_representation(th, enc.with_rules(RuleSet(enc.rules.rules, [e])))
        assert not report[3].passed

    def test_missing_state(self, domain):
        th, enc = domain("switches", 2)
        report = check_representation(th, enc, sample=enc.terms()[:3])
        assert not report[1].passed


class TestInvertible:
    @pytest.mark.parametrize("name,n,kw", [("switches", 4, {}), ("switches", 3, {"variant": "indicator"}),
                                           ("hanoi", 3, {}), ("river", 3, {}), ("blocks", 3, {})])
    def test_domains(self, domain, name, n, kw):
        _, enc = domain(name, n, **kw)
        ok, witness, count = check_invertible(enc)
        assert ok and witness is None and count > 0

    def test_one_way_rule(self, domain):
        _, enc = domain("switches", 2)
        one_way = enc.with_rules(RuleSet([enc.rules["turn_on"]]))
        ok, witness, _ = check_invertible(one_way)
        assert not ok and witness.rule_id == "turn_on"
