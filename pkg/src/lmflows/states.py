"""Domain vocabulary: labour-market states, calendar quarters, age bands, cohorts."""

import dataclasses
import enum
import re


class LaborState(enum.Enum):
    """The seven labour-market states, in canonical matrix order (index 0..6)."""

    SE = 0      # self-employment
    TE = 1      # temporary employment
    PE = 2      # permanent employment
    U = 3       # unemployment
    NLFET = 4   # neither in the labour force nor in education or training
    EDU = 5     # education
    FS = 6      # furlough scheme

    @property
    def index(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "LaborState":
        """Case-insensitive parse of a state code; accepts NEET as an alias of NLFET."""
        name = str(text).strip().upper()
        if name == "NEET":
            name = "NLFET"
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"unknown state code {text!r}") from None


STATE_ORDER: tuple[LaborState, ...] = tuple(LaborState)
STATE_CODES: tuple[str, ...] = tuple(s.name for s in STATE_ORDER)
N_STATES = len(STATE_ORDER)


class Sex(enum.Enum):
    M = "M"
    F = "F"

    @classmethod
    def parse(cls, text: str) -> "Sex":
        name = str(text).strip().upper()
        try:
            return cls[name]
        except KeyError:
            raise ValueError(f"invalid sex {text!r} (expected M or F)") from None


class MacroRegion(enum.Enum):
    NORTH = "NORTH"
    CENTRE = "CENTRE"
    SOUTH = "SOUTH"

    @classmethod
    def parse(cls, text: str) -> "MacroRegion":
        name = str(text).strip().upper()
        try:
            return cls[name]
        except KeyError:
            raise ValueError(
                f"invalid region {text!r} (expected NORTH, CENTRE or SOUTH)"
            ) from None


class AgeBand(enum.Enum):
    """Disjoint age bands covering ages 15-34, bounds inclusive."""

    TEENS = (15, 19)
    EARLY_YOUNG = (20, 24)
    LATE_YOUNG = (25, 29)
    PRE_ADULTS = (30, 34)

    @property
    def lo(self) -> int:
        return self.value[0]

    @property
    def hi(self) -> int:
        return self.value[1]

    def contains(self, age: int) -> bool:
        return self.lo <= age <= self.hi


AGE_MIN = AgeBand.TEENS.lo
AGE_MAX = AgeBand.PRE_ADULTS.hi


def age_band_of(age: int) -> AgeBand | None:
    """Band containing ``age``, or None outside 15-34. Total on all integers."""
    for band in AgeBand:
        if band.contains(age):
            return band
    return None


_QUARTER_RE = re.compile(r"^(\d{4})\.([1-4])$")


@dataclasses.dataclass(frozen=True, order=True)
class QuarterId:
    """A calendar quarter, ordered by (year, quarter). Rendered as ``YYYY.Q``."""

    year: int
    quarter: int

    def __post_init__(self):
        if not isinstance(self.year, int) or not isinstance(self.quarter, int):
            raise ValueError("year and quarter must be integers")
        if self.year < 1900:
            raise ValueError(f"year {self.year} out of range (must be >= 1900)")
        if self.quarter not in (1, 2, 3, 4):
            raise ValueError(f"quarter {self.quarter} out of range (must be 1..4)")

    def plus(self, n: int) -> "QuarterId":
        total = self.year * 4 + (self.quarter - 1) + n
        return QuarterId(total // 4, total % 4 + 1)

    @classmethod
    def parse(cls, text: str) -> "QuarterId":
        m = _QUARTER_RE.match(str(text).strip())
        if m is None:
            raise ValueError(f"invalid quarter {text!r} (expected YYYY.Q)")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.year}.{self.quarter}"


def quarter_successor(q: QuarterId) -> QuarterId:
    """The next calendar quarter; (y, 4) rolls over to (y+1, 1)."""
    return q.plus(1)


@dataclasses.dataclass(frozen=True)
class Demographics:
    """Respondent attributes, frozen at the first wave of the observation pair."""

    age_at_first_wave: int
    sex: Sex
    italian_citizen: bool
    macro_region: MacroRegion


@dataclasses.dataclass(frozen=True)
class CohortFilter:
    """Conjunction of optional demographic restrictions; absent fields match everything."""

    age_band: AgeBand | None = None
    sex: Sex | None = None
    citizen: bool | None = None
    region: MacroRegion | None = None

    def matches(self, demo: Demographics) -> bool:
        if self.age_band is not None and not self.age_band.contains(demo.age_at_first_wave):
            return False
        if self.sex is not None and demo.sex is not self.sex:
            return False
        if self.citizen is not None and demo.italian_citizen != self.citizen:
            return False
        if self.region is not None and demo.macro_region is not self.region:
            return False
        return True

    def describe(self) -> str:
        parts = []
        if self.age_band is not None:
            parts.append(f"age={self.age_band.name}")
        if self.sex is not None:
            parts.append(f"sex={self.sex.name}")
        if self.citizen is not None:
            parts.append(f"citizen={1 if self.citizen else 0}")
        if self.region is not None:
            parts.append(f"region={self.region.name}")
        return ", ".join(parts) if parts else "all"
