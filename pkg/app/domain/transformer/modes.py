"""The eight weakest-preexpectation calculi."""

from dataclasses import dataclass

from app.models.enums import FaultHandling, Nondeterminism, Termination
from app.models.errors import InputError


@dataclass(frozen=True)
class TransformerMode:
    nondet: Nondeterminism = Nondeterminism.DEMONIC
    termination: Termination = Termination.TOTAL
    faults: FaultHandling = FaultHandling.INTRINSIC

    @property
    def angelic(self) -> bool:
        return self.nondet is Nondeterminism.ANGELIC

    @property
    def liberal(self) -> bool:
        return self.termination is Termination.LIBERAL

    @property
    def extrinsic(self) -> bool:
        return self.faults is FaultHandling.EXTRINSIC

    @property
    def name(self) -> str:
        """wp, awp, wlp, awlp, wep, awep, wlep or awlep."""
        return (
            ("a" if self.angelic else "")
            + "w"
            + ("l" if self.liberal else "")
            + ("e" if self.extrinsic else "")
            + "p"
        )

    def __str__(self) -> str:
        return self.name

    def dual(self) -> "TransformerMode":
        """The mode paired with this one by the duality principle: every component flipped."""
        return TransformerMode(
            Nondeterminism.DEMONIC if self.angelic else Nondeterminism.ANGELIC,
            Termination.TOTAL if self.liberal else Termination.LIBERAL,
            FaultHandling.INTRINSIC if self.extrinsic else FaultHandling.EXTRINSIC,
        )


MODES: dict[str, TransformerMode] = {
    m.name: m
    for m in (
        TransformerMode(n, t, f)
        for n in Nondeterminism
        for t in Termination
        for f in FaultHandling
    )
}

WP = MODES["wp"]
WLP = MODES["wlp"]
WEP = MODES["wep"]


def mode_by_name(name: str) -> TransformerMode:
    try:
        return MODES[name]
    except KeyError:
        raise InputError(f"unknown transformer {name!r}", allowed=sorted(MODES)) from None
