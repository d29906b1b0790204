# ingestion/hashtags.py

import re

HASHTAG_RE = re.compile(r"#(\w+)")


def extract_hashtags(text: str) -> list[str]:
    """
    Every maximal run of letters/digits/underscore after a '#' in the
    lowercased text, deduplicated in order of first appearance.
    """
    tags: list[str] = []
    seen: set[str] = set()
    # lowered before matching: "İ" lowers to "i" + U+0307, which is not a word character
    for match in HASHTAG_RE.finditer(text.lower()):
        tag = match.group(1)
        if tag not in seen:
            seen.add(tag)
            tags.append(tag)
    return tags


def is_valid_tag(tag: str) -> bool:
    return bool(tag) and tag == tag.lower() and all(ch.isalnum() or ch == "_" for ch in tag)


def contains_word(text: str, word: str) -> bool:
    """Case-insensitive whole-word match."""
    pattern = rf"(?<!\w){re.escape(word)}(?!\w)"
    return re.search(pattern, text, flags=re.IGNORECASE) is not None
