#!/usr/bin/env python3
"""
Export the support curves of an instance for plotting.

Writes the u,region,G,R,S,T,phi table and the increasing coupling next to it.

Usage:
    python scripts/export_curves.py --input instance.json
    python scripts/export_curves.py --seed 11 --grid 128
"""

import os
import sys
import argparse
import logging
from datetime import datetime

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.config import DEFAULT_GRID, configure_logging, get_output_dir, get_seed
from shadowcoupling.coupling import increasing_coupling
from shadowcoupling.curves import triple_grid
from shadowcoupling.errors import ShadowCouplingError
from shadowcoupling.export import export_curves_csv, export_to_json, load_instance
from shadowcoupling.instances import random_cd_instance
from shadowcoupling.regime import ustar

configure_logging("INFO")
logger = logging.getLogger(__name__)


def main():
    parser = argparse.ArgumentParser(description="Export R/S/T plot data")
    parser.add_argument("--input", "-i", help="instance file (default: random cd instance)")
    parser.add_argument("--seed", type=int, default=None, help="seed for the random instance")
    parser.add_argument("--grid", type=int, default=DEFAULT_GRID, help="number of uniform grid levels")
    parser.add_argument("--output-dir", default=None, help="output directory (default: SHADOW_OUTPUT_DIR)")
    args = parser.parse_args()

    try:
        if args.input:
            instance = load_instance(args.input)
        else:
            seed = args.seed if args.seed is not None else get_seed()
            instance = random_cd_instance(seed)
            logger.info(f"Using random cd instance from seed {seed}")

        u = ustar(instance.mu, instance.nu)
        triples = triple_grid(instance.mu, instance.nu, args.grid)
        pi = increasing_coupling(instance.mu, instance.nu)
    except ShadowCouplingError as e:
        logger.error(str(e))
        sys.exit(2)

    out_dir = args.output_dir or get_output_dir()
    stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    csv_path = export_curves_csv(triples, os.path.join(out_dir, f"curves_{stamp}.csv"))
    json_path = export_to_json(
        {"instance": instance.to_dict(), "coupling": pi.to_dict()},
        os.path.join(out_dir, f"coupling_{stamp}.json"),
        include_metadata=True,
        metadata={"ustar": str(u), "grid": args.grid, "rows": len(triples)},
    )
    logger.info(f"u* = {u}; {len(triples)} curve rows")
    logger.info(f"Curves: {csv_path}")
    logger.info(f"Coupling: {json_path}")


if __name__ == "__main__":
    main()
