from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator

from data_modals.pydantic_models.lab_modals import (
    CounterexampleRun,
    IdentityConfig,
    Lambda4Config,
    RegularitySweep,
    TailBoundConfig,
    TraceRegularityConfig,
)
from data_modals.pydantic_models.problem_modals import ProblemSpec

Mode = Literal["solve", "kato_sweep", "optimality", "lambda4", "identities", "traces"]

# mode -> the config section it needs
MODE_SECTIONS = {
    "solve": "problem",
    "kato_sweep": "sweep",
    "optimality": "counterexample",
    "lambda4": "lambda4",
    "identities": "identities",
    "traces": "traces",
}


class RunConfig(BaseModel):
    """One experiment: a mode plus the section that configures it."""

    mode: Mode
    out_dir: Optional[str] = None
    seed: int = Field(0, ge=0, lt=2 ** 64)
    emit: List[Literal["csv", "json", "dat"]] = Field(default_factory=lambda: ["csv", "json", "dat"])
    problem: Optional[ProblemSpec] = None
    sweep: Optional[RegularitySweep] = None
    counterexample: Optional[CounterexampleRun] = None
    lambda4: Optional[Lambda4Config] = None
    identities: Optional[IdentityConfig] = None
    tail: Optional[TailBoundConfig] = None
    traces: Optional[TraceRegularityConfig] = None

    @model_validator(mode="after")
    def _fill_section(self):
        section = MODE_SECTIONS[self.mode]
        if getattr(self, section) is None:
            if section == "problem":
                raise ValueError("mode 'solve' needs a 'problem' section")
            defaults = {
                "sweep": RegularitySweep,
                "counterexample": CounterexampleRun,
                "lambda4": Lambda4Config,
                "identities": IdentityConfig,
                "traces": TraceRegularityConfig,
            }
            setattr(self, section, defaults[section]())
        if self.mode == "identities" and self.tail is None:
            self.tail = TailBoundConfig()
        return self
