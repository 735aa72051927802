from collections import Counter

import numpy as np
from loguru import logger

from data_modals.pydantic_models.result_modals import Lambda4Result
from services.exceptions import InputError

# k^4 - l^4 must fit comfortably in int64
INT64_FOURTH_POWER_LIMIT = 2 ** 62


def _buckets_int64(K: int) -> tuple[np.ndarray, int]:
    ks = np.arange(-K, K + 1, dtype=np.int64)
    k, l = np.meshgrid(ks, ks, indexing="ij")
    keys = np.column_stack([(k - l).ravel(), (k ** 4 - l ** 4).ravel()])
    unique, counts = np.unique(keys, axis=0, return_counts=True)
    diagonal = np.all(unique == 0, axis=1)
    return counts[~diagonal], int(counts[diagonal].sum())


def _buckets_wide(K: int) -> tuple[np.ndarray, int]:
    counter: Counter = Counter()
    for k in range(-K, K + 1):
        k4 = k ** 4
        for l in range(-K, K + 1):
            counter[(k - l, k4 - l ** 4)] += 1
    diagonal = counter.pop((0, 0), 0)
    return np.fromiter(counter.values(), dtype=np.int64), diagonal


def count_lambda4(K: int) -> Lambda4Result:
    """
    Brute-force multiplicities of (k - l, k^4 - l^4) over k, l in [-K, K].

    The (0, 0) bucket is the diagonal k = l and is reported separately. Python integers
    take over when K^4 would crowd the int64 range.
    """
    if K < 2:
        raise InputError("count_lambda4 needs K >= 2", {"K": K})
    wide = K ** 4 >= INT64_FOURTH_POWER_LIMIT
    if wide:
        logger.warning(f"K={K}: falling back to arbitrary-precision integers")
        counts, diagonal = _buckets_wide(K)
    else:
        counts, diagonal = _buckets_int64(K)
    sizes, frequency = np.unique(counts, return_counts=True)
    histogram = {int(size): int(freq) for size, freq in zip(sizes, frequency)}
    max_multiplicity = int(counts.max()) if counts.size else 0
    logger.info(f"Lambda(4) count K={K}: max multiplicity {max_multiplicity}, histogram {histogram}")
    return Lambda4Result(K=K, max_multiplicity=max_multiplicity, histogram=histogram, diagonal=diagonal, wide_integers=wide)
