"""Configuration for the QSL verification workbench."""

from functools import lru_cache

from pydantic_settings import BaseSettings

from app.models.schemas import DomainConfig


class Settings(BaseSettings):
    app_env: str = "development"
    debug: bool = False
    log_level: str = "INFO"

    # Default bounded model (the tiny model used by the law suite)
    default_vars: str = "x,y"
    default_vmin: int = -1
    default_vmax: int = 4
    default_addrs: int = 3
    default_max_cells: int = 3

    # Loop fixed points
    loop_max_iters: int = 10_000
    loop_tol: str = "1/1000000"

    # Expected-reward oracle
    oracle_max_configs: int = 200_000
    oracle_max_iters: int = 100_000

    # Law bench
    law_trials: int = 1000
    law_seed: int = 0

    # HTTP surface
    api_title: str = "QSL Verification Workbench"
    api_version: str = "1.0.0"

    def default_domain(self) -> DomainConfig:
        return DomainConfig(
            vars=self.default_vars,
            vmin=self.default_vmin,
            vmax=self.default_vmax,
            addr_count=self.default_addrs,
            loop_max_iters=self.loop_max_iters,
            loop_tolerance=self.loop_tol,
        )

    class Config:
        env_file = ".env"
        env_prefix = "QSL_"
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    return Settings()
