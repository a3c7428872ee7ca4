from functools import lru_cache
from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Largest poset on which directed subsets are enumerated exhaustively
    exhaustive_bound: int = Field(default=15, alias="ORDBASE_EXHAUSTIVE_BOUND")
    # Largest poset on which clauses quantifying over every subset are swept
    sweep_bound: int = Field(default=10, alias="ORDBASE_SWEEP_BOUND")
    # Order comparisons a semi-decision may spend before it reports a stall
    stream_budget: int = Field(default=200_000, alias="ORDBASE_STREAM_BUDGET")
    faithful_sample: int = Field(default=20, alias="ORDBASE_FAITHFUL_SAMPLE")
    chain_length: int = Field(default=20, alias="ORDBASE_CHAIN_LENGTH")
    omega_depth: int = Field(default=64, alias="ORDBASE_OMEGA_DEPTH")
    # Intervals an interval-chain supremum may consume to answer one query
    limit_depth: int = Field(default=256, alias="ORDBASE_LIMIT_DEPTH")
    seed: int = Field(default=0, alias="ORDBASE_SEED")
    sweep_count: int = Field(default=25, alias="ORDBASE_SWEEP_COUNT")
    sweep_max_size: int = Field(default=7, alias="ORDBASE_SWEEP_MAX_SIZE")
    log_level: str = Field(default="WARNING", alias="ORDBASE_LOG_LEVEL")

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"


@lru_cache
def get_settings() -> Settings:
    return Settings()
