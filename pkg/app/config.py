import os
import threading
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


def get_project_root() -> Path:
    """Get the project root directory"""
    return Path(__file__).resolve().parent.parent


PROJECT_ROOT = get_project_root()
WORKSPACE_ROOT = PROJECT_ROOT / "workspace"


class SeriesSettings(BaseModel):
    default_truncation: int = Field(200, description="Default truncation order N")
    laurent_cap: int = Field(2000, description="Upper bound on the Laurent order K")
    exact_binomial_limit: int = Field(
        62, description="Largest j+l for which binomials are taken from exact integers"
    )


class ToleranceSettings(BaseModel):
    """Every numeric guard used by the analyses, in one place"""

    pole_guard: float = Field(1e-9, description="Minimum |z - p| for evaluation")
    radius_slack: float = Field(
        1e-12, description="Relative slack allowed past a declared radius"
    )
    equality_snap: float = Field(
        1e-12, description="Margins with |margin| below this count as equality"
    )
    area_tail: float = Field(1e-8, description="Tail threshold for the Laurent energy")
    membership_tail: float = Field(1e-10, description="Tail threshold for sum n|a_n|")
    laurent_tail: float = Field(1e-14, description="Relative tail for the default K")
    zero_on_boundary: float = Field(1e-12, description="Minimum |R~'| on |zeta|=1")
    vanishing_denominator: float = Field(1e-14, description="Minimum |dF| for mu")
    critical_point: float = Field(1e-12, description="Minimum |f'| for S_f")
    degenerate_map: float = Field(1e-12, description="Minimum |ad - bc|")
    omega_bound: float = Field(1e-8, description="Slack on the omega' bound")
    schwarzian_bound: float = Field(1e-6, description="Slack on 6k/(1-p^2)^2")
    schwarzian_improvement: float = Field(
        1e-6, description="Refinement stops once a round improves less than this"
    )
    degenerate_eta: float = Field(1e-12, description="Minimum sampled |eta'|")
    collision_image: float = Field(1e-10, description="Image distance counted as collision")
    collision_preimage: float = Field(1e-6, description="Preimage separation for collisions")
    bilipschitz_relative: float = Field(1e-9, description="tol = this * |dz|")


class AreaSettings(BaseModel):
    curve_samples: int = Field(16384, description="Samples for the shoelace oracle")
    quadrature_grid: int = Field(1024, description="Cartesian grid for the Dirichlet oracle")
    supersampling: int = Field(4, description="Sub-samples per axis in boundary cells")


class ExtensionSettings(BaseModel):
    boundary_samples: int = Field(8192, description="Samples on |zeta| = 1")
    coarse_boundary_samples: int = Field(4096, description="First pass for sup|omega'|")
    radial_count: int = Field(64, description="Radial samples of the dilatation grid")
    angular_count: int = Field(256, description="Angular samples of the dilatation grid")
    exterior_radius: float = Field(10.0, description="Outer radius R of the grid")
    injectivity_pairs: int = Field(10_000, description="Random pairs per diagnostic")
    injectivity_radius: float = Field(3.0, description="Sampling disk for the diagnostic")
    omega_dilation: float = Field(
        1.0 - 1e-6, description="r in omega_r(z) = omega(rz) used by the CLI"
    )


class SchwarzianSettings(BaseModel):
    radial_count: int = Field(128, description="Radii of the polar grid")
    angular_count: int = Field(512, description="Angles of the polar grid")
    max_radius: float = Field(1.0 - 1e-4, description="Largest sampled radius")
    refinements: int = Field(24, description="Maximum local refinement rounds")
    fd_radius: float = Field(1e-2, description="Circle radius of the FD stencil")
    fd_nodes: int = Field(16, description="Nodes of the FD stencil")


class HarmonicSettings(BaseModel):
    grid: int = Field(64, description="Interior lattice size per axis")
    boundary_samples: int = Field(4096, description="Boundary samples before refinement")
    refine_samples: int = Field(256, description="Samples in the refined boundary window")
    bilipschitz_pairs: int = Field(10_000, description="Random pairs per diagnostic")


class RunSettings(BaseModel):
    workers: int = Field(4, description="Inputs processed concurrently")
    seed: int = Field(0, description="Default seed recorded in every artifact")


class LogSettings(BaseModel):
    level: str = Field(default="INFO", description="stderr log level")
    file_level: str = Field(default="DEBUG", description="log file level")
    file_enabled: bool = Field(default=True, description="Write logs/<name>_<ts>.log")


class AppConfig(BaseModel):
    series: SeriesSettings = Field(default_factory=SeriesSettings)
    tolerances: ToleranceSettings = Field(default_factory=ToleranceSettings)
    area: AreaSettings = Field(default_factory=AreaSettings)
    extension: ExtensionSettings = Field(default_factory=ExtensionSettings)
    schwarzian: SchwarzianSettings = Field(default_factory=SchwarzianSettings)
    harmonic: HarmonicSettings = Field(default_factory=HarmonicSettings)
    run: RunSettings = Field(default_factory=RunSettings)
    log: LogSettings = Field(default_factory=LogSettings)


class Config:
    _instance = None
    _lock = threading.Lock()
    _initialized = False

    def __new__(cls):
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not self._initialized:
            with self._lock:
                if not self._initialized:
                    self._config = None
                    self._load_initial_config()
                    self._initialized = True

    @staticmethod
    def _get_config_path() -> Optional[Path]:
        root = PROJECT_ROOT
        config_path = root / "config" / "config.toml"
        if config_path.exists():
            return config_path
        example_path = root / "config" / "config.toml.example"
        if example_path.exists():
            return example_path
        return None

    def _load_config(self) -> dict:
        config_path = self._get_config_path()
        if config_path is None:
            return {}
        try:
            with config_path.open("rb") as f:
                return tomllib.load(f)
        except (OSError, tomllib.TOMLDecodeError) as e:
            # fall back to built-in defaults rather than refusing to start
            print(f"Failed to load {config_path}, using defaults: {e}")
            return {}

    def _load_initial_config(self):
        raw_config = self._load_config()

        run_config = dict(raw_config.get("run", {}))
        workers = os.getenv("QCX_WORKERS", "")
        if workers.strip():
            run_config["workers"] = int(workers)

        log_config = dict(raw_config.get("log", {}))
        log_level = os.getenv("QCX_LOG_LEVEL", "")
        if log_level.strip():
            log_config["level"] = log_level.upper()

        self._config = AppConfig(
            series=SeriesSettings(**raw_config.get("series", {})),
            tolerances=ToleranceSettings(**raw_config.get("tolerances", {})),
            area=AreaSettings(**raw_config.get("area", {})),
            extension=ExtensionSettings(**raw_config.get("extension", {})),
            schwarzian=SchwarzianSettings(**raw_config.get("schwarzian", {})),
            harmonic=HarmonicSettings(**raw_config.get("harmonic", {})),
            run=RunSettings(**run_config),
            log=LogSettings(**log_config),
        )

    def reload(self):
        """Re-read the config file and environment"""
        with self._lock:
            self._initialized = False
            self._load_initial_config()
            self._initialized = True

    @property
    def series(self) -> SeriesSettings:
        return self._config.series

    @property
    def tolerances(self) -> ToleranceSettings:
        return self._config.tolerances

    @property
    def area(self) -> AreaSettings:
        return self._config.area

    @property
    def extension(self) -> ExtensionSettings:
        return self._config.extension

    @property
    def schwarzian(self) -> SchwarzianSettings:
        return self._config.schwarzian

    @property
    def harmonic(self) -> HarmonicSettings:
        return self._config.harmonic

    @property
    def run(self) -> RunSettings:
        return self._config.run

    @property
    def log(self) -> LogSettings:
        return self._config.log

    @property
    def root_path(self) -> Path:
        """Get the root path of the application"""
        return PROJECT_ROOT


config = Config()
