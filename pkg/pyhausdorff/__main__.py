"""Run the pyhausdorff CLI."""
import sys

from pyhausdorff.cli import main

sys.exit(main())
