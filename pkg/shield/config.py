"""Shield project-wide constants."""

# Signal conventions
DEFAULT_SAMPLE_RATE_HZ = 16000
DEFAULT_CLIP_LENGTH = 16000  # 1 s at 16 kHz

# Log-mel front end (Hann window, HTK mel scale, 0 Hz to Nyquist)
DEFAULT_N_MELS = 64
DEFAULT_WIN = 1024
DEFAULT_HOP = 256
LOG_FLOOR = 1e-10

# Clamp applied wherever the log of a probability is taken
LOG_PROB_EPS = 1e-7

# Class indices, fixed for every classifier in the project
REAL_CLASS = 1
FAKE_CLASS = 0

# Synthetic fake artifact chain
QUANTIZATION_BITS = 6
LOWPASS_CUTOFF_HZ = 3400.0
PHASE_JUMP_FRAME = 512

# Train/val/test membership by seeded hash of the clip id (percent)
SPLIT_FRACTIONS = {"train": 80, "val": 10, "test": 10}

# Checkpoint file format
CHECKPOINT_FORMAT_VERSION = 1

# Run configuration schema
RUN_CONFIG_SCHEMA_VERSION = 1

# Environment variable overriding the configured output directory
OUTPUT_ROOT_ENV = "SHIELD_OUTPUT_ROOT"
