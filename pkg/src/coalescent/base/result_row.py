from __future__ import annotations
from dataclasses import dataclass
from typing import Optional

UNSTABLE_MARKER = 'unstable'

# Column order of every result table.
RESULT_COLUMNS = [
    'mode',
    'load_gbps',
    'qf',
    'qd',
    'phi',
    'phi_ci',
    'delay_s',
    'delay_ci',
    'rho_f',
    'rho_d',
    'p_d',
    'seed',
    'horizon_s',
]


@dataclass(frozen=True)
class ResultRow:
    """
    One line of a result table. Values that do not apply to a mode (e.g., delays for model rows) are None. For
    repeated simulations the metrics are means over the seeds and the *_ci fields hold 95 % confidence interval
    half-widths; seed is then the first seed of the series.
    """
    mode: str
    load_gbps: float
    qf: int
    qd: int
    phi: Optional[float] = None
    phi_ci: Optional[float] = None
    delay_s: Optional[float] = None
    delay_ci: Optional[float] = None
    rho_f: Optional[float] = None
    rho_d: Optional[float] = None
    p_d: Optional[float] = None
    seed: Optional[int] = None
    horizon_s: Optional[float] = None
    unstable: bool = False
    """
    The offered load saturates the link (rho >= 1); the metric fields stay empty and phi shows the marker.
    """

    def values(self) -> dict:
        """
        Returns the row as ordered column/value mapping (see RESULT_COLUMNS).
        """
        values = {column: getattr(self, column) for column in RESULT_COLUMNS}

        if self.unstable:
            values['phi'] = UNSTABLE_MARKER
        return values
