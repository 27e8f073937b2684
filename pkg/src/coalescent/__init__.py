from .base.orchestrator import Orchestrator  # noqa: F401
from .base.config import Config  # noqa: F401
from .base.experiment_config import ExperimentConfig, Mode, OutputFormat  # noqa: F401
from .base.phy_profile import PhyProfile  # noqa: F401
from .base.coalescing_config import CoalescingConfig  # noqa: F401
from .base.traffic_spec import TrafficSpec  # noqa: F401
from .model.energy_model import EnergyModel  # noqa: F401
from .simulation.simulator import Simulator, simulate  # noqa: F401
