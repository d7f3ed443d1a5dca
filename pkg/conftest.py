import os
import sys

# the test modules import their mixins by bare name
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "tests"))
