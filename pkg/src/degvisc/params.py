"""Model constants, derived parameter formulas, and admissibility checks.

The viscosity exponent ``alpha`` and the pressure exponent ``gamma`` select
which well-posedness regime a run lives in; the regularization strength
``epsilon`` is a user parameter at desk scale.  The analysis-scale ceiling
``epsilon0`` (astronomically small, e.g. 48**-10) is computed and reported,
never enforced.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class SystemVariant(enum.Enum):
    """The three regularized systems the simulator can advance."""

    A2D = "A2D"                 # symmetric stress D(u), 2D, sqrt(eps)-augmented
    B3D = "B3D"                 # full-gradient stress, 2D/3D
    C3D_ALPHA1 = "C3D_alpha1"   # alpha = 1 quartic-gradient system, 3D

    @classmethod
    def parse(cls, text: str) -> "SystemVariant":
        key = text.strip().lower().replace("-", "_")
        for member in cls:
            if member.value.lower() == key or member.name.lower() == key:
                return member
        raise ValueError(f"unknown system variant: {text!r}")


class Theorem(enum.Enum):
    """Which existence regime a parameter choice falls under."""

    THM_2D_S2 = "Thm2D_S2"              # 2D, symmetric stress
    THM_2D_S1 = "Thm2D_S1"              # 2D, full-gradient stress
    THM_3D_S1 = "Thm3D_S1"              # 3D, full-gradient stress
    THM_3D_S2_ALPHA1 = "Thm3D_S2_alpha1"  # 3D, symmetric stress, alpha = 1
    NONE = "None"


# Fixed exponent of the cold-pressure term in system C.
P0_SYSTEM_C = 50


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of an admissibility check; invalid regimes are reported, not thrown."""

    admissible: bool
    theorem: Theorem
    violated_conditions: tuple[str, ...] = ()
    needs_L4_data: bool = False
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        assert self.admissible == (len(self.violated_conditions) == 0)


def validate_regime(alpha: float, gamma: float, dim: int,
                    system: SystemVariant) -> RegimeReport:
    """Check (alpha, gamma) against the admissible region for `system` in `dim`.

    dim=1 is a desk-scale testing extension: only the structural minimum
    alpha > 1/2, gamma > 1 is required and no theorem is claimed.
    """
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2, or 3, got {dim}")
    if not (math.isfinite(alpha) and math.isfinite(gamma)):
        raise ValueError("alpha and gamma must be finite")

    violated: list[str] = []
    notes: list[str] = []
    theorem = Theorem.NONE
    needs_l4 = False

    if system is SystemVariant.C3D_ALPHA1:
        if alpha != 1.0:
            violated.append("alpha=1")
        if not gamma > 1.0:
            violated.append("gamma>1")
        if not gamma < 3.0:
            violated.append("gamma<3")
        if dim == 3:
            theorem = Theorem.THM_3D_S2_ALPHA1
        else:
            notes.append("desk-scale extension: system C below 3D")
    elif dim == 1:
        # Testing dimension: keep only what the parameter formulas need.
        if not alpha > 0.5:
            violated.append("alpha>1/2")
        if not gamma > 1.0:
            violated.append("gamma>1")
        notes.append("desk-scale extension: N=1 not covered by the theorems")
    elif dim == 2:
        if not alpha > 0.5:
            violated.append("alpha>1/2")
        if not gamma > 1.0:
            violated.append("gamma>1")
        if not gamma >= 2.0 * alpha - 1.0:
            violated.append("gamma>=2*alpha-1")
        theorem = (Theorem.THM_2D_S2 if system is SystemVariant.A2D
                   else Theorem.THM_2D_S1)
    else:  # dim == 3
        if system is SystemVariant.A2D:
            violated.append("A2D system is 2D-only")
        else:
            theorem = Theorem.THM_3D_S1
            # At alpha = 1 both case branches apply; the closed branch
            # [3/4, 1] is preferred.
            if 0.75 <= alpha <= 1.0:
                if not gamma > 1.0:
                    violated.append("gamma>1")
                if not gamma < 6.0 * alpha - 3.0:
                    violated.append("gamma<6*alpha-3")
            elif 1.0 < alpha < 2.0:
                if not gamma >= 2.0 * alpha - 1.0:
                    violated.append("gamma>=2*alpha-1")
                if not gamma <= 3.0 * alpha - 1.0:
                    violated.append("gamma<=3*alpha-1")
                if not gamma < 3.0:
                    violated.append("gamma<3")
                needs_l4 = gamma >= 2.0 * alpha - 1.0 and gamma <= 3.0 * alpha - 1.0
            else:
                violated.append("alpha in [3/4,2)")

    admissible = not violated
    if not admissible:
        theorem = Theorem.NONE
        needs_l4 = False
    return RegimeReport(
        admissible=admissible,
        theorem=theorem,
        violated_conditions=tuple(violated),
        needs_L4_data=needs_l4 and admissible,
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class ModelParams:
    """All constants of one model configuration, with derived quantities.

    epsilon = 0 is admitted as the degenerate un-regularized case: the
    damping and cold-diffusion terms vanish identically and initial-data
    mollification loses its positive floor.
    """

    alpha: float
    gamma: float
    epsilon: float
    eta0: float
    system: SystemVariant
    p0: int = P0_SYSTEM_C
    gamma_tilde: float = field(init=False)
    epsilon0: float = field(init=False)
    sigma0: float = field(init=False)

    def __post_init__(self):
        if not (self.alpha > 0.5):
            raise ValueError("alpha must exceed 1/2")
        if not (self.gamma > 1.0):
            raise ValueError("gamma must exceed 1")
        if self.epsilon < 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.eta0 <= 0.0:
            raise ValueError("eta0 must be positive")
        if self.system is SystemVariant.C3D_ALPHA1:
            if self.alpha != 1.0:
                raise ValueError("system C requires alpha = 1")
            if self.p0 != P0_SYSTEM_C:
                raise ValueError(f"system C fixes p0 = {P0_SYSTEM_C}")
        object.__setattr__(self, "gamma_tilde", self.gamma + 1.0 / 6.0)
        if self.system is SystemVariant.C3D_ALPHA1:
            eps0 = min(1e-10, self.eta0)
            sigma0 = 1e-10
        else:
            eps0 = min((2.0 * self.alpha - 1.0)
                       * (16.0 * (self.alpha + self.gamma)) ** -10.0,
                       self.eta0)
            sigma0 = (8.0 * (self.alpha + self.gamma + 2.0)) ** -8.0
        object.__setattr__(self, "epsilon0", eps0)
        object.__setattr__(self, "sigma0", sigma0)

    @property
    def epsilon_within_bound(self) -> bool:
        """Whether the user epsilon also satisfies the analysis-scale gate."""
        return 0.0 < self.epsilon <= self.epsilon0

    @property
    def sqrt_epsilon(self) -> float:
        return math.sqrt(self.epsilon)


def derive_constants(alpha: float, gamma: float, eta0: float,
                     system: SystemVariant, *, epsilon: float,
                     dim: int = 2) -> ModelParams:
    """Build ModelParams for an admissible regime; rejects inadmissible ones."""
    report = validate_regime(alpha, gamma, dim, system)
    if not report.admissible:
        raise ValueError(
            "inadmissible regime: " + ", ".join(report.violated_conditions))
    return ModelParams(alpha=alpha, gamma=gamma, epsilon=epsilon, eta0=eta0,
                       system=system)
