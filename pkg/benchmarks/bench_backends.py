"""Time the compiled kernels against the numpy fallback on a 512x512 cover.

    python benchmarks/bench_backends.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

import iwtwm.iwt
import iwtwm.wm_core
from iwtwm import _pure
from iwtwm.pipeline import embed_image, extract_image
from iwtwm.pixel_io import BitImage, GrayImage

try:
    from iwtwm import _kernels
except ImportError:
    _kernels = None


def _use(mod):
    iwtwm.iwt.kernels = mod
    iwtwm.wm_core.kernels = mod


def _cases(mod, x, payload):
    n = len(payload) // 6
    bits = payload[:n]

    def embed_band():
        band = x[256:, :256].astype(np.int64)
        tkey = np.zeros(n, np.uint8)
        mod.embed_segment(band, bits, tkey, 1)
        mod.embed_segment(band, bits, tkey, 2)

    cover = GrayImage(x.astype(np.uint8))
    logo = BitImage(payload.reshape(1, -1))
    marked, side = embed_image(cover, logo)

    return {
        "forward_lift": lambda: mod.forward_lift(x),
        "inverse_lift": lambda: mod.inverse_lift(x),
        "embed 2 passes, one band": embed_band,
        "embed_image 1.5 bpp": lambda: embed_image(cover, logo),
        "extract_image 1.5 bpp": lambda: extract_image(marked, side),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    x = rng.integers(0, 256, (512, 512)).astype(np.int64)
    payload = rng.integers(0, 2, 393216, dtype=np.uint8)

    backends = [("python", _pure)] + ([("cython", _kernels)] if _kernels else [])
    results = {}
    for name, mod in backends:
        _use(mod)
        for label, fn in _cases(mod, x, payload).items():
            fn()
            results.setdefault(label, {})[name] = min(timeit.repeat(fn, number=1, repeat=args.repeat))

    print(f"{'case':28s}" + "".join(f"{n:>12s}" for n, _ in backends) + ("     speedup" if _kernels else ""))
    for label, row in results.items():
        line = f"{label:28s}" + "".join(f"{row[n] * 1e3:10.2f}ms" for n, _ in backends)
        if _kernels:
            line += f"{row['python'] / row['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
