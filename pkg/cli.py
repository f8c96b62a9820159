"""Run the toolkit without installing it: python cli.py check --css site.css"""

from app.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
