import logging

from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="GKREDUCE_", env_file=".env", extra="ignore")

    sample_points: int = 10
    include_timings: bool = False
    log_level: str = "WARNING"
    scenarios_dir: str | None = None

    @property
    def numeric_log_level(self) -> int:
        level = logging.getLevelName(self.log_level.upper())
        return level if isinstance(level, int) else logging.WARNING


try:
    settings = Settings()
    logger.info(
        f"Loaded settings: sample_points={settings.sample_points}, "
        f"include_timings={settings.include_timings}, "
        f"log_level='{settings.log_level}', scenarios_dir='{settings.scenarios_dir}'"
    )
except Exception as e:
    logger.error(f"Error loading settings: {e}")
    settings = Settings.model_construct()  # Use defaults
    logger.warning("Using default settings due to loading error.")
