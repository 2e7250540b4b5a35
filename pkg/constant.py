# Image defaults
IMAGE_SIZE = 224
SUPPORTED_SUFFIXES = (".png", ".jpg", ".jpeg")
DEFAULT_BIT_DEPTH = 16

# Content extraction
GRAY_WEIGHTS = (0.299, 0.587, 0.114)  # BT.601
BLUR_SIGMA = 3.0

# Losses
EPS_GUARD = 1e-8
START_JITTER = 1e-3  # uniform start-point noise, breaks the zero gradient at X_adv = X_s

# Metrics
PSNR_CAP_DB = 100.0
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03

# Defense defaults
JPEG_QUALITY = 75
DEFENSE_BLUR_SIGMA = 1.0
DEFENSE_NOISE_SIGMA = 0.02
DEFENSE_BITS = 5

# Manifests
MANIFEST_FILE_NAME = "manifest.jsonl"
FLOAT_SIGNIFICANT_DIGITS = 9

# Exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARTIAL = 2
