from dotenv import load_dotenv
import os

load_dotenv()

DEFAULT_SEED = int(os.getenv('MPH_SEED', '42'))
DEFAULT_SAMPLES = int(os.getenv('MPH_SAMPLES', '100000'))
VERIFY_POINTS = int(os.getenv('MPH_VERIFY_POINTS', '30'))
CHUNK_SIZE = int(os.getenv('MPH_CHUNK_SIZE', '65536'))
WORKERS = int(os.getenv('MPH_WORKERS', '1'))
RESTRICTION_TRIALS = int(os.getenv('MPH_RESTRICTION_TRIALS', '200'))
LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

SCHEMA_VERSION = 1
