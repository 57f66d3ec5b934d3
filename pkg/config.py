"""
config.py
Central configuration for kaczeta.
Contains model defaults, truncation degrees, resource caps, tolerances and output settings.
"""

import os
from pathlib import Path

# --- Base Paths ---
BASE_DIR = Path(__file__).resolve().parent
SCHEMA_DIR = BASE_DIR / "schemas"
LOG_DIR = BASE_DIR / "data" / "logs"

# --- Model Defaults ---
MODEL = {
    "m": 1,
    "lambda": [0.5],
    "J": [1.0],
    "beta": 1.0,
    "z": [0.25, 0.0],
    "zeros_z": [1.0, 0.0],             # z of the root scan when --z is not given
    "zeros_range": [0.0, 2.0, 0.05],   # lo, hi, step of the real root scan
}

# --- Truncation (max total Hermite degree per number of channels) ---
TRUNCATION = {
    1: 60,   # 61 basis functions
    2: 16,   # 153
    3: 10,   # 286
    "fallback": 6,
    "det_lookback": 4,    # determinants also reported at N - 4
    "tail_lookback": 2,   # tail_gap compares degrees N - tail_lookback and N
}

# --- Resource Limits ---
LIMITS = {
    "max_n": 24,               # 2^n configuration enumeration cap
    "max_n_env": "KACZETA_MAX_N",
    "block_bits": 16,          # configurations per enumeration block = 2^block_bits
    "threads": 1,
}

# --- Tolerances ---
TOLERANCES = {
    "residual": 1e-9,
    "pole": 1e-12,
    "det_drift": 1e-6,
    "bisect_xtol": 1e-10,
    "quadrature": 1e-8,
    "gaussian_identity": 1e-6,
    "symmetry": 1e-12,
    "degeneracy": 1e-6,
}

# --- Residual Sample Points ---
SAMPLING = {
    "points": 32,
    "seed": 42,
    "radius_fraction": 0.9,
}

# --- Output ---
OUTPUT = {
    "format": "json",
    "csv_digits": 12,
    "schema": str(SCHEMA_DIR / "output.schema.json"),
}

# --- Logging ---
LOGGING = {
    "level": os.environ.get("KACZETA_LOG_LEVEL", "WARNING"),
    "log_to_file": False,
    "filename": str(LOG_DIR / "kaczeta.log"),
}
