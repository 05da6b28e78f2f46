"""Process entry point for the sfdesign command line."""

import sys

from sfdesign.main import main


if __name__ == "__main__":
    sys.exit(main())
