#!/usr/bin/env python3
"""Draws the stock character library into assets/ (PNG + library.json).

Every character here is an original drawing produced by this script.
Output is deterministic; rerun after editing and commit the result.
"""

import json
import math
import sys
from pathlib import Path

from PIL import Image, ImageDraw

OUT = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "assets"
SS = 4  # supersampling factor
INK = (30, 30, 30, 255)

TAGS = ["neutral", "happy", "sad", "angry", "surprised"]


def canvas(w, h):
    img = Image.new("RGBA", (w * SS, h * SS), (0, 0, 0, 0))
    return img, ImageDraw.Draw(img)


def s(*v):
    return [int(round(x * SS)) for x in v]


def ellipse(d, box, fill, outline=INK, width=2):
    d.ellipse(s(*box), fill=fill, outline=outline, width=width * SS)


def face(d, cx, cy, r, tag):
    """Eyes, brows and mouth centred on (cx, cy) for a head of radius r."""
    ex, ey, er = r * 0.38, cy - r * 0.15, r * 0.11
    for side in (-1, 1):
        x = cx + side * ex
        if tag == "surprised":
            ellipse(d, (x - er * 1.4, ey - er * 1.4, x + er * 1.4, ey + er * 1.4), (255, 255, 255, 255), width=1)
            ellipse(d, (x - er * 0.6, ey - er * 0.6, x + er * 0.6, ey + er * 0.6), INK, width=1)
        elif tag == "happy":
            d.arc(s(x - er * 1.3, ey - er, x + er * 1.3, ey + er * 1.6), 200, 340, fill=INK, width=2 * SS)
        else:
            ellipse(d, (x - er, ey - er, x + er, ey + er), INK, width=1)
        by = ey - r * 0.25
        if tag == "angry":
            d.line(s(x - side * er * 2, by - er, x + side * er * 0.2, by + er * 0.8), fill=INK, width=3 * SS)
        elif tag == "sad":
            d.line(s(x - side * er * 2, by + er * 0.6, x + side * er * 0.2, by - er * 0.6), fill=INK, width=2 * SS)
        elif tag == "surprised":
            d.arc(s(x - er * 1.8, by - er * 2.2, x + er * 1.8, by + er * 0.4), 200, 340, fill=INK, width=2 * SS)
    my, mw = cy + r * 0.42, r * 0.35
    if tag == "happy":
        d.chord(s(cx - mw, my - mw * 0.9, cx + mw, my + mw * 0.7), 0, 180, fill=(150, 30, 40, 255), outline=INK, width=2 * SS)
    elif tag == "sad":
        d.arc(s(cx - mw, my - mw * 0.1, cx + mw, my + mw * 1.0), 200, 340, fill=INK, width=2 * SS)
    elif tag == "angry":
        d.rectangle(s(cx - mw, my - mw * 0.15, cx + mw, my + mw * 0.2), fill=(255, 255, 255, 255), outline=INK, width=2 * SS)
        d.line(s(cx - mw, my + mw * 0.02, cx + mw, my + mw * 0.02), fill=INK, width=1 * SS)
    elif tag == "surprised":
        ellipse(d, (cx - mw * 0.35, my - mw * 0.5, cx + mw * 0.35, my + mw * 0.4), (120, 20, 30, 255))
    else:
        d.line(s(cx - mw * 0.8, my, cx + mw * 0.8, my), fill=INK, width=2 * SS)


def finish(img, bottom_pad=0):
    """Downsample and crop to the alpha bounding box."""
    img = img.resize((img.width // SS, img.height // SS), Image.LANCZOS)
    # drop the faint resampling fringe so the crop lands on visible ink
    alpha = img.getchannel("A").point(lambda a: 0 if a < 32 else a)
    img.putalpha(alpha)
    box = alpha.getbbox()
    img = img.crop(box)
    if bottom_pad:
        padded = Image.new("RGBA", (img.width, img.height + bottom_pad), (0, 0, 0, 0))
        padded.paste(img, (0, 0))
        img = padded
    return img


def professor(tag):
    img, d = canvas(140, 260)
    # lab coat body
    d.polygon(s(30, 120, 110, 120, 128, 255, 12, 255), fill=(245, 245, 250, 255), outline=INK, width=2 * SS)
    d.line(s(70, 125, 70, 255), fill=INK, width=2 * SS)
    d.polygon(s(58, 120, 82, 120, 70, 150), fill=(70, 110, 180, 255), outline=INK, width=SS)
    # wild hair
    for k in range(9):
        a = math.pi * (0.95 + 1.1 * k / 8)
        x, y = 70 + 50 * math.cos(a), 68 + 50 * math.sin(a)
        ellipse(d, (x - 16, y - 16, x + 16, y + 16), (225, 225, 230, 255), width=1)
    ellipse(d, (28, 26, 112, 116), (250, 214, 180, 255))
    # glasses
    for x in (52, 88):
        ellipse(d, (x - 13, 52, x + 13, 76), None, width=2)
    d.line(s(65, 62, 75, 62), fill=INK, width=2 * SS)
    face(d, 70, 72, 42, tag)
    return finish(img)


def owl(tag):
    img, d = canvas(150, 190)
    ellipse(d, (10, 40, 140, 185), (150, 105, 65, 255))
    ellipse(d, (38, 95, 112, 180), (225, 200, 160, 255), width=1)
    d.polygon(s(22, 48, 42, 5, 58, 45), fill=(150, 105, 65, 255), outline=INK, width=2 * SS)
    d.polygon(s(128, 48, 108, 5, 92, 45), fill=(150, 105, 65, 255), outline=INK, width=2 * SS)
    for x in (50, 100):
        ellipse(d, (x - 26, 42, x + 26, 94), (250, 240, 210, 255))
    face(d, 75, 80, 62, tag)
    d.polygon(s(68, 84, 82, 84, 75, 100), fill=(235, 165, 40, 255), outline=INK, width=SS)
    for x in (55, 95):
        d.line(s(x - 8, 185, x, 172, x + 8, 185), fill=(235, 165, 40, 255), width=4 * SS)
    return finish(img)


def mathematician(tag):
    img, d = canvas(120, 250)
    d.rectangle(s(25, 118, 95, 200), fill=(120, 60, 140, 255), outline=INK, width=2 * SS)
    d.rectangle(s(32, 200, 52, 248), fill=(60, 60, 70, 255), outline=INK, width=2 * SS)
    d.rectangle(s(68, 200, 88, 248), fill=(60, 60, 70, 255), outline=INK, width=2 * SS)
    d.text(s(48, 140), "π", fill=(255, 255, 255, 255), font_size=22 * SS)
    ellipse(d, (18, 30, 102, 118), (205, 160, 120, 255))
    d.polygon(s(20, 52, 60, 4, 100, 52), fill=(40, 40, 40, 255), outline=INK, width=2 * SS)
    face(d, 60, 78, 40, tag)
    return finish(img)


def senator(tag):
    img, d = canvas(170, 190)
    # bust, cut off at the bottom
    d.chord(s(5, 120, 165, 260), 180, 360, fill=(40, 50, 80, 255), outline=INK, width=2 * SS)
    d.polygon(s(72, 122, 98, 122, 85, 175), fill=(200, 40, 40, 255), outline=INK, width=SS)
    ellipse(d, (35, 10, 135, 130), (240, 200, 170, 255))
    d.chord(s(35, 4, 135, 70), 180, 360, fill=(235, 235, 235, 255), outline=INK, width=2 * SS)
    face(d, 85, 78, 48, tag)
    return finish(img, bottom_pad=3)


def robot(tag):
    img, d = canvas(130, 220)
    d.line(s(65, 2, 65, 22), fill=INK, width=2 * SS)
    ellipse(d, (58, 0, 72, 14), (230, 60, 60, 255), width=1)
    d.rounded_rectangle(s(15, 20, 115, 110), radius=14 * SS, fill=(170, 185, 195, 255), outline=INK, width=2 * SS)
    d.rounded_rectangle(s(25, 115, 105, 200), radius=8 * SS, fill=(140, 155, 170, 255), outline=INK, width=2 * SS)
    d.rectangle(s(30, 200, 50, 218), fill=(90, 100, 110, 255), outline=INK, width=2 * SS)
    d.rectangle(s(80, 200, 100, 218), fill=(90, 100, 110, 255), outline=INK, width=2 * SS)
    face(d, 65, 68, 44, tag)
    return finish(img)


def cat(tag):
    img, d = canvas(170, 150)
    d.arc(s(110, 40, 168, 120), 270, 90, fill=(230, 140, 50, 255), width=7 * SS)
    ellipse(d, (40, 70, 140, 148), (230, 140, 50, 255))
    d.polygon(s(18, 30, 28, 0, 50, 22), fill=(230, 140, 50, 255), outline=INK, width=2 * SS)
    d.polygon(s(102, 30, 92, 0, 70, 22), fill=(230, 140, 50, 255), outline=INK, width=2 * SS)
    ellipse(d, (10, 10, 110, 100), (230, 140, 50, 255))
    face(d, 60, 58, 44, tag)
    for side in (-1, 1):
        for k in (-1, 0, 1):
            d.line(s(60 + side * 20, 72 + k * 4, 60 + side * 46, 68 + k * 9), fill=INK, width=SS)
    return finish(img)


CHARACTERS = [
    dict(id="professor-quark", display_name="Professor Quark", category="science",
         draw=professor, tags=TAGS, wikipedia_url="https://en.wikipedia.org/wiki/Scientist"),
    dict(id="hoot", display_name="Hoot the Owl", category="animal",
         draw=owl, tags=TAGS, wikipedia_url="https://en.wikipedia.org/wiki/Owl"),
    dict(id="dr-abacus", display_name="Dr. Abacus", category="mathematics",
         draw=mathematician, tags=["neutral", "happy", "sad"], wikipedia_url="https://en.wikipedia.org/wiki/Mathematician"),
    dict(id="senator-puff", display_name="Senator Puff", category="political",
         draw=senator, tags=["neutral", "angry", "happy"], bottom_cut=True,
         wikipedia_url="https://en.wikipedia.org/wiki/Senate"),
    dict(id="bolt", display_name="Bolt", category="other",
         draw=robot, tags=["neutral", "surprised"], wikipedia_url="https://en.wikipedia.org/wiki/Robot"),
    dict(id="marmalade", display_name="Marmalade", category="animal",
         draw=cat, tags=["neutral", "happy"], wikipedia_url="https://en.wikipedia.org/wiki/Cat"),
]


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    manifest = {"version": 1, "characters": []}
    for c in CHARACTERS:
        (OUT / c["id"]).mkdir(exist_ok=True)
        expressions = {}
        for tag in c["tags"]:
            rel = f"{c['id']}/{tag}.png"
            c["draw"](tag).save(OUT / rel, optimize=False)
            expressions[tag] = {"path": rel, "bottom_cut": True} if c.get("bottom_cut") else rel
        manifest["characters"].append({
            "id": c["id"],
            "display_name": c["display_name"],
            "creator": "panelforge contributors",
            "wikipedia_url": c["wikipedia_url"],
            "category": c["category"],
            "expressions": expressions,
        })
    (OUT / "library.json").write_text(json.dumps(manifest, indent=2) + "\n")


if __name__ == "__main__":
    main()
