#!/usr/bin/env python3
"""Render reference glyph bitmaps (PGM) and the template manifest.

Produces one P5 image per (font, label) under <out>/<Font>/<label>.pgm and a
tab-separated manifest at <out>/manifest.tsv. The engine itself never reads
outline fonts; this helper only prepares its input data.

Fonts used are metric-compatible stand-ins:
  Arial           -> Arimo
  ComicSansMS     -> Comic Neue
  TimesNewRoman   -> Tinos
"""

import argparse
import pathlib
import string

from PIL import Image, ImageDraw, ImageFont

FONTS = [
    ("Arial", "arimo-latin-400-normal.woff"),
    ("ComicSansMS", "comic-neue-latin-400-normal.woff"),
    ("TimesNewRoman", "tinos-latin-400-normal.woff"),
]
ALPHABET = string.ascii_uppercase + string.digits


def render(font: ImageFont.FreeTypeFont, ch: str, margin: int) -> Image.Image:
    left, top, right, bottom = font.getbbox(ch)
    width = right - left + 2 * margin
    height = bottom - top + 2 * margin
    img = Image.new("L", (width, height), 255)
    ImageDraw.Draw(img).text((margin - left, margin - top), ch, font=font, fill=0)
    return img


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--font-dir", required=True, type=pathlib.Path)
    parser.add_argument("--out", required=True, type=pathlib.Path)
    parser.add_argument("--size", type=int, default=96)
    parser.add_argument("--margin", type=int, default=4)
    args = parser.parse_args()

    lines = ["# font\tlabel\tpath"]
    for name, file in FONTS:
        font = ImageFont.truetype(str(args.font_dir / file), args.size)
        (args.out / name).mkdir(parents=True, exist_ok=True)
        for ch in ALPHABET:
            rel = f"{name}/{ch}.pgm"
            render(font, ch, args.margin).save(args.out / rel)
            lines.append(f"{name}\t{ch}\t{rel}")
    (args.out / "manifest.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
