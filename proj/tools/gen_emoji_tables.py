#!/usr/bin/env python3
"""Regenerate data/emoji_ranges.csv and data/shortcodes.csv from a Unicode
emoji-test.txt file.

Usage: gen_emoji_tables.py path/to/emoji-test.txt data/

Ranges cover every non-ASCII codepoint that occurs in a listed emoji sequence,
minus the joiners and modifiers that only ever extend a cluster. Shortcodes are
the CLDR short names in snake_case, plus the GitHub-style aliases below (aliases
win on collision).
"""

import re
import sys
import unicodedata
from pathlib import Path

# Joiners/selectors that never start a cluster.
NON_STARTERS = {0x200D, 0xFE0E, 0xFE0F, 0x20E3} | set(range(0xE0020, 0xE0080))

ALIASES = {
    "+1": "👍", "thumbsup": "👍", "-1": "👎", "thumbsdown": "👎",
    "smile": "😊", "blush": "😊", "smiley": "😃", "grin": "😁",
    "laughing": "😆", "joy": "😂", "wink": "😉", "heart": "❤️",
    "broken_heart": "💔", "tada": "🎉", "rocket": "🚀", "eyes": "👀",
    "thinking": "🤔", "bulb": "💡", "pencil2": "✏️", "wrench": "🔧",
    "pick": "⛏️", "clap": "👏", "shipit": "🐿️", "trollface": "👹",
    "sweat_smile": "😅", "confused": "😕", "disappointed": "😞",
    "cry": "😢", "worried": "😟", "ok_hand": "👌", "pray": "🙏",
    "fire": "🔥", "bug": "🐛", "warning": "⚠️", "question": "❓",
    "x": "❌", "white_check_mark": "✅", "heavy_check_mark": "✔️",
    "sparkles": "✨", "zap": "⚡", "lock": "🔒", "memo": "📝",
    "recycle": "♻️", "art": "🎨", "speech_balloon": "💬",
    "slightly_smiling_face": "🙂", "slightly_frowning_face": "🙁",
    "grimacing": "😬", "roll_eyes": "🙄", "raised_hands": "🙌",
    "muscle": "💪", "star": "⭐", "100": "💯", "see_no_evil": "🙈",
    "nerd_face": "🤓", "face_with_monocle": "🧐", "stuck_out_tongue": "😛",
    "neutral_face": "😐", "scream": "😱", "sob": "😭", "angry": "😠",
    "rage": "😡", "innocent": "😇", "sunglasses": "😎", "heart_eyes": "😍",
    "kissing_heart": "😘", "unamused": "😒", "sweat": "😓",
    "frowning": "😦", "open_mouth": "😮", "hushed": "😯", "sleeping": "😴",
    "no_mouth": "😶", "upside_down_face": "🙃", "relieved": "😌",
    "construction": "🚧", "boom": "💥", "skull": "💀", "poop": "💩",
    "hankey": "💩", "wave": "👋", "point_up": "☝️", "point_right": "👉",
    "raised_hand": "✋", "ghost": "👻", "hammer": "🔨", "gear": "⚙️",
    "package": "📦", "mag": "🔍", "books": "📚", "link": "🔗",
    "exclamation": "❗", "heavy_plus_sign": "➕", "heavy_minus_sign": "➖",
    "stop_sign": "🛑", "no_entry": "⛔", "arrow_up": "⬆️",
    "arrow_down": "⬇️", "twisted_rightwards_arrows": "🔀",
    "rewind": "⏪", "lipstick": "💄", "green_heart": "💚",
    "seedling": "🌱", "label": "🏷️", "alien": "👽", "wheelchair": "♿",
    "children_crossing": "🚸", "card_file_box": "🗃️", "loud_sound": "🔊",
    "mute": "🔇", "busts_in_silhouette": "👥", "monocle_face": "🧐",
    "adhesive_bandage": "🩹", "test_tube": "🧪", "coffin": "⚰️",
    "pushpin": "📌", "dizzy": "💫", "goal_net": "🥅", "necktie": "👔",
    "stethoscope": "🩺", "bricks": "🧱", "technologist": "🧑‍💻",
    "money_with_wings": "💸", "thread": "🧵", "safety_vest": "🦺",
    "pencil": "📝", "speak_no_evil": "🙊", "hear_no_evil": "🙉",
    "question_mark": "❓", "partying_face": "🥳", "hugs": "🤗",
    "facepalm": "🤦", "shrug": "🤷", "cookie": "🍪", "cake": "🍰",
    "beers": "🍻", "coffee": "☕", "trophy": "🏆", "medal": "🏅",
}


def short_name(name: str) -> str:
    decomposed = unicodedata.normalize("NFKD", name)
    ascii_only = decomposed.encode("ascii", "ignore").decode("ascii").lower()
    ascii_only = ascii_only.replace("&", "and").replace("#", "number_sign")
    ascii_only = ascii_only.replace("*", "asterisk")
    slug = re.sub(r"[^a-z0-9+]+", "_", ascii_only).strip("_")
    return slug


def main() -> int:
    if len(sys.argv) != 3:
        print(__doc__, file=sys.stderr)
        return 2
    source = Path(sys.argv[1])
    out_dir = Path(sys.argv[2])
    line_re = re.compile(
        r"^([0-9A-F ]+?)\s*;\s*(fully-qualified|component)\s*#\s*\S+\s+E\d+\.\d+\s+(.*)$")

    starters = set()
    shortcodes = {}
    for raw in source.read_text(encoding="utf-8").splitlines():
        m = line_re.match(raw)
        if not m:
            continue
        cps = [int(h, 16) for h in m.group(1).split()]
        for cp in cps:
            if cp >= 0x80 and cp not in NON_STARTERS:
                starters.add(cp)
        glyph = "".join(chr(cp) for cp in cps)
        code = short_name(m.group(3))
        if code and code not in shortcodes:
            shortcodes[code] = glyph

    shortcodes.update(ALIASES)

    ranges = []
    for cp in sorted(starters):
        if ranges and ranges[-1][1] + 1 == cp:
            ranges[-1][1] = cp
        else:
            ranges.append([cp, cp])

    with open(out_dir / "emoji_ranges.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("start_hex,end_hex\n")
        for lo, hi in ranges:
            f.write(f"{lo:X},{hi:X}\n")

    with open(out_dir / "shortcodes.csv", "w", encoding="utf-8", newline="\n") as f:
        f.write("shortcode,glyph\n")
        for code in sorted(shortcodes):
            f.write(f"{code},{shortcodes[code]}\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
