from abc import ABC, abstractmethod
from typing import Set

from statements.TheoremStatement import TheoremStatement


class UsageOracle(ABC):
    """Tells which hypotheses of a theorem its proof does not need."""

    name = "abstract"

    @abstractmethod
    def unused_hypotheses(self, stmt: TheoremStatement) -> Set[str]:
        """
        Names of hypotheses that can be removed without breaking the proof.

        Raises:
            OracleUnavailable: when the oracle cannot answer for this theorem.
        """
        pass
