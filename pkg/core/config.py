from pydantic_settings import BaseSettings,SettingsConfigDict
from functools import lru_cache
from pathlib import Path



class Settings(BaseSettings):
    APP_NAME: str = "thetaforge"
    LOG_LEVEL: str = "WARNING"
    ORDER: int = 300
    DERIVATION_ORDER: int = 200
    RECHECK_MIN_ORDER: int = 100
    SCAN_ORDER: int = 60
    CORPUS_DIR: Path = Path(__file__).parent.parent / "infrastructure" / "corpus"
    MAX_WORKERS: int = 4

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="THETAFORGE_",
        case_sensitive=True
    )

        
@lru_cache
def get_settings() -> Settings:
    return Settings()
