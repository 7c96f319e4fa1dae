"""Situation-calculus theories encoded as term rewriting systems.

States are ground terms, actions are rewrite rules, and plans come from
unfailing completion followed by plan extraction.  The package also builds
rewrite systems from explicit finite theories and checks the structural
conditions under which subterm rules exist.
"""

from .completion import CompletionConfig, CompletionResult, ProofTrace, complete, cost_trend, join
from .domainfile import DomainFile, emit, parse_domain_file
from .domains import DOMAINS, make_blocks, make_domain, make_hanoi, make_river, make_switches
from .errors import *  # noqa: F401,F403
from .oracle import bfs_plan, reachable_states
from .ordering import Order, Precedence, lpo_compare, lpo_greater, orient
from .planner import Plan, extract_plan, optimize_plan, plan, validate_plan
from .rewrite import RewriteRule, RewriteStep, Rewriter, RuleKind, RuleSet, normalize
from .synthesis import (build_r0, build_r1, build_r2, check_action_f_limited, check_f_expressive,
                        check_f_limited, check_uniform, check_weakly_f_expressive,
                        is_action_support)
from .terms import (App, HOLE, Signature, Var, apply_subst, match_lhs, parse_term, rename_apart,
                    replace_at, size, subterm_at, unify)
from .theory import (ActionId, Encoding, FluentAssignment, GroundTheory, check_invertible,
                     check_representation, label_action)

__version__ = "0.1.0"
