"""Machine checks of Condorcet-consistency axioms on small profile spaces."""

from .axioms import AXIOMS, Certificate, CertificateError, Verdict, check, nice_set, replay
from .majority import condorcet_winners, margin
from .preferences import BudgetError, DomainError, DomainSpec, PreconditionError
from .rules import Rule, UnknownRuleError, rule_from_id

__version__ = "0.1.0"
