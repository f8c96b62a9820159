"""
Times dichromacy simulation on a synthetic image.

    python scripts/benchmark.py --megapixels 1 --workers 4
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np
from PIL import Image

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from app.core.models import ALL_KINDS  # noqa: E402
from app.utils.logging import create_logger, setup_logging  # noqa: E402
from app.vision.daltonize import daltonize_image  # noqa: E402
from app.vision.simulate import simulate_image  # noqa: E402

logger = create_logger(__name__, component='benchmark')


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument("--megapixels", type=float, default=1.0)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    setup_logging("INFO")
    side = int(round((args.megapixels * 1_000_000) ** 0.5))
    pixels = np.random.default_rng(0).integers(0, 256, size=(side, side, 3), dtype=np.uint8)
    img = Image.fromarray(pixels)

    for label, fn in (("simulate", simulate_image), ("daltonize", daltonize_image)):
        for kind in ALL_KINDS:
            timings = []
            for _ in range(args.repeat):
                start = time.perf_counter()
                fn(img, kind, workers=args.workers)
                timings.append(time.perf_counter() - start)
            logger.info(f"{label} {kind.value}", extra_data={
                'pixels': side * side,
                'workers': args.workers,
                'best_sec': round(min(timings), 3),
            })
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
