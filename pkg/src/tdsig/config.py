import os

LOG_LEVEL = os.getenv("TDSIG_LOG_LEVEL", "WARNING")

# Attempt budget shared by the q and p searches in params.generate_params.
GENERATION_ATTEMPTS = int(os.getenv("TDSIG_GENERATION_ATTEMPTS", "10000"))

PRIMALITY_ERROR_BITS = int(os.getenv("TDSIG_PRIMALITY_ERROR_BITS", "80"))
PRIMALITY_FALSE_POSITIVE = 2.0 ** -PRIMALITY_ERROR_BITS

# Production bit bounds: 2^511 < p < 2^512, 2^159 < q < 2^160.
PRODUCTION_P_BITS = 512
PRODUCTION_Q_BITS = 160

TRANSCRIPT_ENCODING = "utf-8"
