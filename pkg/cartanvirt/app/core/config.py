from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

class Settings(BaseSettings):
    # Randomness: fallback when --seed is not given
    CARTANVIRT_SEED: int = 0

    # Sampling
    CARTANVIRT_SAMPLES: int = 100

    # Application Settings
    CARTANVIRT_LOG_LEVEL: str = "WARNING"

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

@lru_cache()
def get_settings() -> Settings:
    return Settings()
