#pragma once

#include <array>
#include <cstdint>

namespace deptype::font {

// Printable ASCII (32..126) raster font, 11 rows tall. Bit x of a row is
// pixel column x; advance is the pen step in pixels.

inline constexpr int kHeight = 11;

struct Glyph {
  std::uint8_t advance;
  std::array<std::uint16_t, kHeight> rows;
};

inline constexpr std::array<Glyph, 95> kGlyphs = {{
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000}},  // ' '
    {6, {0x000, 0x000, 0x000, 0x006, 0x006, 0x006, 0x006, 0x000, 0x006, 0x000, 0x000}},  // '!'
    {6, {0x000, 0x000, 0x000, 0x00a, 0x00a, 0x00a, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '"'
    {6, {0x000, 0x000, 0x00a, 0x00a, 0x01f, 0x00a, 0x00a, 0x01f, 0x00a, 0x00a, 0x000}},  // '#'
    {6, {0x000, 0x004, 0x01e, 0x013, 0x00f, 0x01e, 0x018, 0x01b, 0x00f, 0x004, 0x000}},  // '$'
    {6, {0x000, 0x000, 0x007, 0x015, 0x00f, 0x004, 0x01e, 0x015, 0x01c, 0x000, 0x000}},  // '%'
    {6, {0x000, 0x000, 0x000, 0x00e, 0x003, 0x006, 0x01f, 0x00d, 0x01f, 0x000, 0x000}},  // '&'
    {6, {0x000, 0x000, 0x00c, 0x004, 0x002, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000}},  // "'"
    {6, {0x000, 0x000, 0x008, 0x004, 0x006, 0x006, 0x006, 0x006, 0x004, 0x008, 0x000}},  // '('
    {6, {0x000, 0x000, 0x002, 0x004, 0x00c, 0x00c, 0x00c, 0x00c, 0x004, 0x002, 0x000}},  // ')'
    {6, {0x000, 0x000, 0x004, 0x00f, 0x006, 0x009, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '*'
    {6, {0x000, 0x000, 0x000, 0x004, 0x004, 0x01f, 0x004, 0x004, 0x000, 0x000, 0x000}},  // '+'
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x00c, 0x004, 0x002}},  // ','
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x01f, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '-'
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x006, 0x000, 0x000}},  // '.'
    {6, {0x000, 0x000, 0x010, 0x010, 0x008, 0x008, 0x004, 0x004, 0x002, 0x002, 0x000}},  // '/'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x01b, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // '0'
    {6, {0x000, 0x000, 0x00c, 0x00f, 0x00c, 0x00c, 0x00c, 0x00c, 0x03f, 0x000, 0x000}},  // '1'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x018, 0x00c, 0x006, 0x01b, 0x01f, 0x000, 0x000}},  // '2'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x018, 0x00e, 0x018, 0x01b, 0x00e, 0x000, 0x000}},  // '3'
    {6, {0x000, 0x000, 0x018, 0x01c, 0x01a, 0x01b, 0x03f, 0x018, 0x018, 0x000, 0x000}},  // '4'
    {6, {0x000, 0x000, 0x01f, 0x003, 0x00f, 0x01b, 0x018, 0x019, 0x00f, 0x000, 0x000}},  // '5'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x003, 0x00f, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // '6'
    {6, {0x000, 0x000, 0x01f, 0x01b, 0x018, 0x00c, 0x00c, 0x006, 0x006, 0x000, 0x000}},  // '7'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x00e, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // '8'
    {6, {0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x01e, 0x018, 0x01b, 0x00e, 0x000, 0x000}},  // '9'
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x006, 0x000, 0x000, 0x006, 0x000, 0x000}},  // ':'
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x006, 0x000, 0x000, 0x006, 0x002, 0x001}},  // ';'
    {6, {0x000, 0x000, 0x000, 0x00c, 0x006, 0x003, 0x006, 0x00c, 0x000, 0x000, 0x000}},  // '<'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00f, 0x000, 0x00f, 0x000, 0x000, 0x000, 0x000}},  // '='
    {6, {0x000, 0x000, 0x000, 0x006, 0x00c, 0x018, 0x00c, 0x006, 0x000, 0x000, 0x000}},  // '>'
    {6, {0x000, 0x000, 0x000, 0x00e, 0x019, 0x00c, 0x006, 0x000, 0x006, 0x000, 0x000}},  // '?'
    {6, {0x000, 0x000, 0x00e, 0x013, 0x019, 0x015, 0x015, 0x039, 0x003, 0x00e, 0x000}},  // '@'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x00e, 0x00a, 0x01f, 0x01b, 0x03b, 0x000, 0x000}},  // 'A'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x01b, 0x00f, 0x01b, 0x01b, 0x00f, 0x000, 0x000}},  // 'B'
    {6, {0x000, 0x000, 0x000, 0x01e, 0x01b, 0x003, 0x003, 0x01b, 0x00e, 0x000, 0x000}},  // 'C'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x01b, 0x01b, 0x01b, 0x01b, 0x00f, 0x000, 0x000}},  // 'D'
    {6, {0x000, 0x000, 0x000, 0x01f, 0x003, 0x00f, 0x003, 0x01b, 0x01f, 0x000, 0x000}},  // 'E'
    {6, {0x000, 0x000, 0x000, 0x01f, 0x003, 0x00f, 0x003, 0x003, 0x007, 0x000, 0x000}},  // 'F'
    {6, {0x000, 0x000, 0x000, 0x00e, 0x01b, 0x003, 0x01f, 0x01b, 0x01e, 0x000, 0x000}},  // 'G'
    {6, {0x000, 0x000, 0x000, 0x03b, 0x01b, 0x01f, 0x01b, 0x01b, 0x03b, 0x000, 0x000}},  // 'H'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x006, 0x006, 0x006, 0x006, 0x00f, 0x000, 0x000}},  // 'I'
    {6, {0x000, 0x000, 0x000, 0x01e, 0x00c, 0x00c, 0x00d, 0x00d, 0x007, 0x000, 0x000}},  // 'J'
    {6, {0x000, 0x000, 0x000, 0x01b, 0x00b, 0x007, 0x00f, 0x01b, 0x037, 0x000, 0x000}},  // 'K'
    {6, {0x000, 0x000, 0x000, 0x007, 0x003, 0x003, 0x003, 0x01b, 0x01f, 0x000, 0x000}},  // 'L'
    {6, {0x000, 0x000, 0x000, 0x011, 0x01b, 0x01b, 0x01f, 0x015, 0x015, 0x000, 0x000}},  // 'M'
    {6, {0x000, 0x000, 0x000, 0x03b, 0x017, 0x017, 0x01b, 0x01b, 0x013, 0x000, 0x000}},  // 'N'
    {6, {0x000, 0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // 'O'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x01b, 0x01b, 0x00f, 0x003, 0x007, 0x000, 0x000}},  // 'P'
    {6, {0x000, 0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x01b, 0x01b, 0x00e, 0x018, 0x000}},  // 'Q'
    {6, {0x000, 0x000, 0x000, 0x00f, 0x01b, 0x01b, 0x00f, 0x01b, 0x037, 0x000, 0x000}},  // 'R'
    {6, {0x000, 0x000, 0x000, 0x01e, 0x013, 0x00f, 0x01c, 0x019, 0x00f, 0x000, 0x000}},  // 'S'
    {6, {0x000, 0x000, 0x000, 0x01f, 0x016, 0x006, 0x006, 0x006, 0x00f, 0x000, 0x000}},  // 'T'
    {6, {0x000, 0x000, 0x000, 0x03b, 0x01b, 0x01b, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // 'U'
    {6, {0x000, 0x000, 0x000, 0x03b, 0x01b, 0x00a, 0x00e, 0x00e, 0x004, 0x000, 0x000}},  // 'V'
    {6, {0x000, 0x000, 0x000, 0x035, 0x015, 0x015, 0x01f, 0x00e, 0x00a, 0x000, 0x000}},  // 'W'
    {6, {0x000, 0x000, 0x000, 0x033, 0x01e, 0x00c, 0x00c, 0x01e, 0x033, 0x000, 0x000}},  // 'X'
    {6, {0x000, 0x000, 0x000, 0x033, 0x033, 0x01e, 0x00c, 0x00c, 0x01e, 0x000, 0x000}},  // 'Y'
    {6, {0x000, 0x000, 0x000, 0x01f, 0x01b, 0x00c, 0x006, 0x01b, 0x01f, 0x000, 0x000}},  // 'Z'
    {6, {0x000, 0x000, 0x00e, 0x006, 0x006, 0x006, 0x006, 0x006, 0x006, 0x00e, 0x000}},  // '['
    {6, {0x000, 0x000, 0x001, 0x001, 0x002, 0x002, 0x004, 0x004, 0x008, 0x008, 0x000}},  // '\\'
    {6, {0x000, 0x000, 0x00e, 0x00c, 0x00c, 0x00c, 0x00c, 0x00c, 0x00c, 0x00e, 0x000}},  // ']'
    {6, {0x000, 0x000, 0x004, 0x00e, 0x01b, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '^'
    {6, {0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000, 0x03f}},  // '_'
    {6, {0x000, 0x000, 0x006, 0x004, 0x008, 0x000, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '`'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00e, 0x01b, 0x01e, 0x01b, 0x03f, 0x000, 0x000}},  // 'a'
    {6, {0x000, 0x000, 0x003, 0x003, 0x00f, 0x01b, 0x01b, 0x01b, 0x00f, 0x000, 0x000}},  // 'b'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00e, 0x01b, 0x003, 0x01b, 0x00e, 0x000, 0x000}},  // 'c'
    {6, {0x000, 0x000, 0x01c, 0x018, 0x01e, 0x01b, 0x01b, 0x01b, 0x03e, 0x000, 0x000}},  // 'd'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00e, 0x01b, 0x01f, 0x003, 0x01e, 0x000, 0x000}},  // 'e'
    {6, {0x000, 0x000, 0x01c, 0x006, 0x01f, 0x006, 0x006, 0x006, 0x01f, 0x000, 0x000}},  // 'f'
    {6, {0x000, 0x000, 0x000, 0x000, 0x036, 0x01b, 0x01b, 0x01b, 0x01e, 0x018, 0x00f}},  // 'g'
    {6, {0x000, 0x000, 0x003, 0x003, 0x00f, 0x01b, 0x01b, 0x01b, 0x01b, 0x000, 0x000}},  // 'h'
    {6, {0x000, 0x000, 0x00c, 0x000, 0x00f, 0x00c, 0x00c, 0x00c, 0x03f, 0x000, 0x000}},  // 'i'
    {6, {0x000, 0x000, 0x00c, 0x000, 0x00f, 0x00c, 0x00c, 0x00c, 0x00c, 0x00c, 0x007}},  // 'j'
    {6, {0x000, 0x000, 0x003, 0x003, 0x01b, 0x00f, 0x007, 0x00f, 0x03b, 0x000, 0x000}},  // 'k'
    {6, {0x000, 0x000, 0x00f, 0x00c, 0x00c, 0x00c, 0x00c, 0x00c, 0x03f, 0x000, 0x000}},  // 'l'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00f, 0x01f, 0x015, 0x015, 0x015, 0x000, 0x000}},  // 'm'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00d, 0x01b, 0x01b, 0x01b, 0x01b, 0x000, 0x000}},  // 'n'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00e, 0x01b, 0x01b, 0x01b, 0x00e, 0x000, 0x000}},  // 'o'
    {6, {0x000, 0x000, 0x000, 0x000, 0x00f, 0x01b, 0x01b, 0x01b, 0x00f, 0x003, 0x007}},  // 'p'
    {6, {0x000, 0x000, 0x000, 0x000, 0x036, 0x01b, 0x01b, 0x01b, 0x01e, 0x018, 0x03c}},  // 'q'
    {6, {0x000, 0x000, 0x000, 0x000, 0x03b, 0x02e, 0x006, 0x006, 0x00f, 0x000, 0x000}},  // 'r'
    {6, {0x000, 0x000, 0x000, 0x000, 0x01e, 0x007, 0x01e, 0x038, 0x01f, 0x000, 0x000}},  // 's'
    {6, {0x000, 0x000, 0x006, 0x006, 0x01f, 0x006, 0x006, 0x036, 0x01c, 0x000, 0x000}},  // 't'
    {6, {0x000, 0x000, 0x000, 0x000, 0x01b, 0x01b, 0x01b, 0x01b, 0x03e, 0x000, 0x000}},  // 'u'
    {6, {0x000, 0x000, 0x000, 0x000, 0x01b, 0x01b, 0x00e, 0x00e, 0x004, 0x000, 0x000}},  // 'v'
    {6, {0x000, 0x000, 0x000, 0x000, 0x035, 0x015, 0x01f, 0x01e, 0x00a, 0x000, 0x000}},  // 'w'
    {6, {0x000, 0x000, 0x000, 0x000, 0x037, 0x01e, 0x00c, 0x01e, 0x03b, 0x000, 0x000}},  // 'x'
    {6, {0x000, 0x000, 0x000, 0x000, 0x03b, 0x01b, 0x01b, 0x00a, 0x00e, 0x006, 0x003}},  // 'y'
    {6, {0x000, 0x000, 0x000, 0x000, 0x01f, 0x00d, 0x006, 0x01b, 0x01f, 0x000, 0x000}},  // 'z'
    {6, {0x000, 0x000, 0x018, 0x00c, 0x00c, 0x006, 0x00c, 0x00c, 0x00c, 0x018, 0x000}},  // '{'
    {6, {0x000, 0x000, 0x000, 0x004, 0x004, 0x004, 0x004, 0x004, 0x004, 0x004, 0x000}},  // '|'
    {6, {0x000, 0x000, 0x003, 0x006, 0x006, 0x00c, 0x006, 0x006, 0x006, 0x003, 0x000}},  // '}'
    {6, {0x000, 0x000, 0x000, 0x000, 0x016, 0x00d, 0x000, 0x000, 0x000, 0x000, 0x000}},  // '~'
}};

}  // namespace deptype::font
