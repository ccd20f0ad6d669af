import os

# Defaults mirroring the benchmark protocol
DEFAULT_EPSILON = 0.01
DEFAULT_TRIALS = 1000
DEFAULT_SEED = 1

# Product replacement
DEFAULT_BURN_IN = 100
DEFAULT_PR_SLOTS = 10

# Word-tracking samplers are rebuilt once their tape grows past this many lines
DEFAULT_WORD_TAPE_LIMIT = 1000

# Oracle
DEFAULT_ENUMERATION_CAP = 10**7
DEFAULT_PROFILE_CAP = 50000

# Exit statuses
EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# Strategies
RANDOM = 'random'
COSET_REPS = 'coset-reps'
EXHAUSTIVE_FINAL = 'exhaustive-final'
STRATEGIES = (RANDOM, COSET_REPS, EXHAUSTIVE_FINAL)

# Membership test kinds
CENTRALIZER = 'centralizer'
CENTRALIZER_ANY = 'centralizer-any'
CYCLIC_NORMALIZER = 'cyclic-normalizer'
NORMALIZER = 'normalizer'
STORED_SET = 'stored-set'
ORDERS = 'orders'
TEST_KINDS = (CENTRALIZER, CENTRALIZER_ANY, CYCLIC_NORMALIZER, NORMALIZER, STORED_SET, ORDERS)

# Claim verdicts
PASS = 'PASS'
FAIL = 'FAIL'
UNCERTIFIED = 'UNCERTIFIED'

# Name reserved for the identity element in chain specs
IDENTITY_NAME = '1'

# Shipped data
DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'data')
GENERATORS_DIR = os.path.join(DATA_DIR, 'generators')
RECIPES_DIR = os.path.join(DATA_DIR, 'recipes')
CHAINS_DIR = os.path.join(DATA_DIR, 'chains')

class dotdict(dict):
    """Dictionary with attribute access, used for the args object handed to workers."""
    def __getattr__(self, name):
        try:
            return self[name]
        except KeyError:
            raise AttributeError(name)

    def __setattr__(self, name, value):
        self[name] = value

def default_args() -> dotdict:
    return dotdict({
        # Sifting
        'epsilon': DEFAULT_EPSILON,
        'seed': DEFAULT_SEED,

        # Product replacement
        'burn_in': DEFAULT_BURN_IN,
        'pr_slots': DEFAULT_PR_SLOTS,
        'word_tape_limit': DEFAULT_WORD_TAPE_LIMIT,

        # Bench
        'trials': DEFAULT_TRIALS,
        'jobs': 1,
        'progress': False,

        # Oracle
        'enumeration_cap': DEFAULT_ENUMERATION_CAP,
        'profile_cap': DEFAULT_PROFILE_CAP,
    })
