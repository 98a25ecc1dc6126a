import os
from dotenv import load_dotenv

load_dotenv()


class Settings:
    DATABASE_URL = os.getenv("DATABASE_URL", "sqlite:///./pdpoly.sqlite3")

    LOG_DIR = os.getenv("LOG_DIR", "logs")
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

    # Caps on enumerated vertices and on intermediate rays of the hull kernels
    VERTEX_BUDGET = int(os.getenv("VERTEX_BUDGET", "20000"))
    # Cap on input collections walked by classification
    COLLECTION_BUDGET = int(os.getenv("COLLECTION_BUDGET", "65536"))

    THREADS = int(os.getenv("THREADS", "1"))
