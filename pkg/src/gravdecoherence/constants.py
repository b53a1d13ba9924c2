"""Physical constants (CODATA 2018, SI units)."""

from dataclasses import asdict, dataclass
import math


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299_792_458.0  # m / s, exact
    h: float = 6.626_070_15e-34  # J s, exact
    k_B: float = 1.380_649e-23  # J / K, exact
    G: float = 6.674_30e-11  # m^3 / (kg s^2)
    g_earth: float = 9.806_65  # m / s^2, standard gravity
    eV: float = 1.602_176_634e-19  # J, exact

    @property
    def hbar(self) -> float:
        return self.h / (2.0 * math.pi)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["hbar"] = self.hbar
        return d


CONSTANTS = PhysicalConstants()

c = CONSTANTS.c
h = CONSTANTS.h
hbar = CONSTANTS.hbar
k_B = CONSTANTS.k_B
G = CONSTANTS.G
g_earth = CONSTANTS.g_earth
eV = CONSTANTS.eV

M_EARTH = 5.972e24  # kg
M_SUN = 1.98847e30  # kg
