import sys

from tankcodesign.cli import main

if __name__ == "__main__":
    sys.exit(main())
