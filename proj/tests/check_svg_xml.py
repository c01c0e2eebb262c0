"""Generate the factorial set with the CLI and parse every file as XML."""

import json
import pathlib
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET

SVG = "{http://www.w3.org/2000/svg}"


def main() -> int:
    cli, out = sys.argv[1], pathlib.Path(sys.argv[2])
    shutil.rmtree(out, ignore_errors=True)
    subprocess.run([cli, "generate", "--out", str(out)], check=True)
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    files = sorted(p.name for p in out.glob("*.svg"))
    assert sorted(e["file"] for e in manifest) == files, "manifest does not match files"
    assert len(files) == 64, f"expected 64 svgs, found {len(files)}"
    for name in files:
        root = ET.parse(out / name).getroot()
        assert root.tag == SVG + "svg" and root.get("version") == "1.1", name
        dots = root.findall(f".//{SVG}circle[@class='dot']")
        slices = root.findall(f".//{SVG}path[@class='slice']")
        entry = next(e for e in manifest if e["file"] == name)
        n = entry["quantiles"]
        assert len(dots) == (0 if entry["vis"] == "pdf" else 2 * n), name
        assert len(slices) == (2 * n if entry["vis"] == "croissant" else 0), name
    shutil.rmtree(out)
    print(f"parsed {len(files)} svg files")
    return 0


if __name__ == "__main__":
    sys.exit(main())
