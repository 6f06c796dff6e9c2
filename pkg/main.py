#!/usr/bin/env python3
"""
Shadow Coupling - Main Entry Point

This is a convenience wrapper around the command-line front end.
For the acceptance battery, use scripts/run_acceptance.py directly.

Usage:
    python main.py ustar -i instance.json
    python main.py couple -i instance.json --method increasing --verify

Environment Variables:
    SHADOW_CHECKS: Optional. Set to 0 to skip postcondition cross-checks.
    SHADOW_LOG_LEVEL: Optional. Log level (default WARNING).
"""

from shadowcoupling.cli import main

if __name__ == "__main__":
    main()
