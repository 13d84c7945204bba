import os
import tempfile
from pathlib import Path
from typing import Dict

METADATA_PREFIX = '# '


def atomic_write_text(path: Path, text: str):
    """Write via a sibling temp file and rename, so readers never see a
    partially written file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    descriptor, temp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix='.tmp'
    )
    try:
        with os.fdopen(descriptor, 'w', encoding='utf-8', newline='\n') as out:
            out.write(text)
        os.replace(temp_name, path)
    except BaseException:
        if os.path.exists(temp_name):
            os.unlink(temp_name)
        raise


def metadata_header(metadata: Dict[str, str]) -> str:
    return ''.join(
        f"{METADATA_PREFIX}{key}: {value}\n"
        for key, value in metadata.items()
    )


def read_metadata_header(text: str) -> Dict[str, str]:
    metadata = {}
    for line in text.splitlines():
        if not line.startswith('#'):
            break
        key, separator, value = line.lstrip('#').strip().partition(':')
        if separator:
            metadata[key.strip()] = value.strip()
    return metadata
