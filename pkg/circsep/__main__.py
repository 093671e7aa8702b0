"""
Entry point for python -m circsep
"""
import sys

from circsep.cli import main

sys.exit(main())
