import re
from typing import List, Tuple

# commas inside [...] belong to a list value, not to the K=V separator
_PARAMS_SPLIT_RE = re.compile(r",(?![^\[]*\])")


def chunks(lst, n):
    """Yield successive n-sized chunks from lst."""
    for i in range(0, len(lst), n):
        yield lst[i : i + n]


def split_by_first(text: str, split: str) -> Tuple[str, str]:
    split_idx = text.index(split)
    return text[:split_idx], text[split_idx + len(split) :]


def split_params(text: str) -> List[str]:
    """
    "a=1,center=[0,0.5,0]" -> ["a=1", "center=[0,0.5,0]"]. Every item must contain a '='.
    """
    if text is None or text.strip() == "":
        return []
    items = [item.strip() for item in _PARAMS_SPLIT_RE.split(text)]
    for item in items:
        if "=" not in item:
            raise ValueError(f"expected K=V, got {item!r}")
        key, _ = split_by_first(item, "=")
        if key.strip() == "":
            raise ValueError(f"missing key in {item!r}")
    return items
