"""
Identity and conjecture checks runnable from the command line.

Each check turns a RunConfig into one or more CheckReports; ``get_check``
looks one up by its CLI name.
"""

import logging
from abc import ABC, abstractmethod

from .config import RunConfig, resolve_parallelism
from .gammamod import GermParams
from .linkseries import (
    NABLA_TARGET_QMAX,
    CheckReport,
    check_a0_symmetry,
    check_asymptotic,
    check_catalan_symmetry,
    check_cusp_example,
    check_gen_vs_cogen,
    check_hilb_vs_quot,
    check_nabla_targets,
    check_node_example,
)

logger = logging.getLogger(__name__)

EXAMPLE_QMAX = 15


class BaseCheck(ABC):
    """A named check over the germ given in the run configuration."""

    name: str = ""

    def params(self, config: RunConfig) -> GermParams:
        return GermParams(n=config.n, d=config.d)

    @abstractmethod
    def run(self, config: RunConfig) -> list[CheckReport]:
        """Run the check. Must be implemented by subclasses."""


class HilbVsQuotCheck(BaseCheck):
    name = "hilb-vs-quot"

    def run(self, config: RunConfig) -> list[CheckReport]:
        parallelism = resolve_parallelism(config.parallelism)
        return [check_hilb_vs_quot(self.params(config), config.qmax, parallelism)]


class GenVsCogenCheck(BaseCheck):
    name = "gen-vs-cogen"

    def run(self, config: RunConfig) -> list[CheckReport]:
        return [check_gen_vs_cogen(self.params(config))]


class CatalanSymmetryCheck(BaseCheck):
    name = "catalan-symmetry"

    def run(self, config: RunConfig) -> list[CheckReport]:
        return [check_catalan_symmetry(self.params(config))]


class NodeCheck(BaseCheck):
    name = "node"

    def run(self, config: RunConfig) -> list[CheckReport]:
        return [check_node_example(config.qmax if config.qmax is not None else EXAMPLE_QMAX)]


class CuspCheck(BaseCheck):
    name = "cusp"

    def run(self, config: RunConfig) -> list[CheckReport]:
        return [check_cusp_example(config.qmax if config.qmax is not None else EXAMPLE_QMAX)]


class A0SymmetryCheck(BaseCheck):
    name = "a0-symmetry"

    def run(self, config: RunConfig) -> list[CheckReport]:
        parallelism = resolve_parallelism(config.parallelism)
        return [check_a0_symmetry(self.params(config), config.qmax, parallelism)]


class AsymptoticCheck(BaseCheck):
    name = "asymptotic"

    def run(self, config: RunConfig) -> list[CheckReport]:
        parallelism = resolve_parallelism(config.parallelism)
        return [check_asymptotic(self.params(config), config.side, parallelism)]


class NablaTargetsCheck(BaseCheck):
    name = "nabla-vs-cogen-targets"

    def run(self, config: RunConfig) -> list[CheckReport]:
        return [check_nabla_targets(config.qmax if config.qmax is not None else NABLA_TARGET_QMAX)]


CHECKS: dict[str, type[BaseCheck]] = {
    check.name: check
    for check in (
        HilbVsQuotCheck,
        GenVsCogenCheck,
        CatalanSymmetryCheck,
        NodeCheck,
        CuspCheck,
        A0SymmetryCheck,
        AsymptoticCheck,
        NablaTargetsCheck,
    )
}


def get_check(name: str) -> BaseCheck:
    """
    Get a check instance by CLI name.

    Raises:
        ValueError: If no check has that name

    """
    if name not in CHECKS:
        available = list(CHECKS.keys())
        msg = f"Unsupported check: {name}. Available: {available}"
        raise ValueError(msg)
    return CHECKS[name]()
