"""Download test matrices from the SuiteSparse collection mirror.

The archive layout of the mirror is configuration, not code: the URL
template and cache directory can both be overridden.  Downloads are staged
to a temporary file and renamed into the cache only on success.
"""

from __future__ import annotations

import io
import os
import tarfile
import tempfile
import urllib.error
import urllib.request

DEFAULT_URL_TEMPLATE = \
    "https://suitesparse-collection-website.herokuapp.com/MM/{group}/{name}.tar.gz"

# name -> (group, rows, cols, nnz); dimensions are checked after download
REGISTRY = {
    "GL7d12": ("JGD_Homology", 8899, 1019, 37519),
    "plat1919": ("HB", 1919, 1919, 32399),
    "flower_5_4": ("JGD_Homology", 5226, 14721, 43942),
    "fv1": ("Norris", 9604, 9604, 85264),
    "3elt_dual": ("AG-Monien", 9000, 9000, 26556),
    "rel8": ("JGD_Relat", 345688, 12347, 821839),
    "crack_dual": ("AG-Monien", 20141, 20141, 60086),
    "nopoly": ("Gaertner", 10774, 10774, 70842),
    "barth5": ("Pothen", 15606, 15606, 61484),
    "L-9": ("AG-Monien", 17983, 17983, 71192),
    "shuttle_eddy": ("Pothen", 10429, 10429, 103599),
}


class UnknownMatrixError(KeyError):
    """Name not in the registry and no explicit group given."""


class FetchError(RuntimeError):
    """Download or extraction failed; the cache was left untouched."""


def default_cache_dir():
    base = os.environ.get("XDG_CACHE_HOME",
                          os.path.join(os.path.expanduser("~"), ".cache"))
    return os.path.join(base, "chebsvd", "matrices")


def _resolve(name):
    if "/" in name:
        group, bare = name.split("/", 1)
        expected = REGISTRY.get(bare)
        return group, bare, expected[1:] if expected else None
    if name not in REGISTRY:
        known = ", ".join(sorted(REGISTRY))
        raise UnknownMatrixError(
            f"unknown matrix '{name}'; pass 'group/name' explicitly or use "
            f"one of: {known}")
    group, m, n, nnz = REGISTRY[name]
    return group, name, (m, n, nnz)


def _check_declared_size(mtx_bytes, name, expected):
    for lineno, raw in enumerate(mtx_bytes.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith(b"%"):
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise FetchError(f"{name}: malformed size line {lineno} in archive")
        m, n, nnz = (int(p) for p in parts)
        if expected is not None and (m, n, nnz) != expected:
            raise FetchError(
                f"{name}: archive declares {m}x{n} with {nnz} entries, "
                f"expected {expected[0]}x{expected[1]} with {expected[2]}")
        return
    raise FetchError(f"{name}: no size line found in archive member")


def fetch(name, cache_dir=None, url_template=DEFAULT_URL_TEMPLATE,
          timeout=120, _opener=None):
    """Fetch the named matrix, returning the path of the cached .mtx file.

    Repeated calls are served from the cache without touching the network.
    ``name`` is either a registered bare name or an explicit ``group/name``.
    """
    group, bare, expected = _resolve(name)
    cache_dir = cache_dir or default_cache_dir()
    os.makedirs(cache_dir, exist_ok=True)
    target = os.path.join(cache_dir, f"{bare}.mtx")
    if os.path.exists(target):
        return target

    url = url_template.format(group=group, name=bare)
    opener = _opener or (lambda u: urllib.request.urlopen(u, timeout=timeout))
    try:
        with opener(url) as resp:
            payload = resp.read()
    except (urllib.error.URLError, OSError, TimeoutError) as exc:
        raise FetchError(
            f"could not download {url}: {exc}; check network access or "
            f"point --url-template at a reachable mirror") from exc

    try:
        with tarfile.open(fileobj=io.BytesIO(payload), mode="r:gz") as tar:
            member = None
            for info in tar.getmembers():
                if info.isfile() and info.name.endswith(f"{bare}.mtx"):
                    member = info
                    break
            if member is None:
                raise FetchError(f"{bare}.mtx not found inside {url}")
            data = tar.extractfile(member).read()
    except (tarfile.TarError, EOFError) as exc:
        raise FetchError(f"corrupt archive from {url}: {exc}") from exc

    _check_declared_size(data, bare, expected)
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)  # atomic: never a partial cache entry
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return target
