use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ising::{CouplingGraph, SpinArray};

/// Side length of the built-in digit glyphs.
pub const GLYPH_SIZE: usize = 10;

const GLYPHS: [[&str; GLYPH_SIZE]; 5] = [
    [
        "..........",
        "...####...",
        "..##..##..",
        "..#....#..",
        "..#....#..",
        "..#....#..",
        "..#....#..",
        "..##..##..",
        "...####...",
        "..........",
    ],
    [
        "..........",
        "....##....",
        "...###....",
        "..#.##....",
        "....##....",
        "....##....",
        "....##....",
        "....##....",
        "..######..",
        "..........",
    ],
    [
        "..........",
        "...####...",
        "..##..##..",
        "......##..",
        ".....##...",
        "....##....",
        "...##.....",
        "..##......",
        "..######..",
        "..........",
    ],
    [
        "..........",
        "..#####...",
        "......##..",
        "......##..",
        "...####...",
        "......##..",
        "......##..",
        "......##..",
        "..#####...",
        "..........",
    ],
    [
        "..........",
        ".....##...",
        "....###...",
        "...#.##...",
        "..#..##...",
        ".#######..",
        ".....##...",
        ".....##...",
        ".....##...",
        "..........",
    ],
];

/// Black-and-white image; pixel 1 is ink.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bitmap {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl Bitmap {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width * height == 0 {
            return Err(Error::invalid("bitmap", "width and height must be positive"));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        if pixels.iter().any(|&p| p > 1) {
            return Err(Error::invalid("bitmap", "pixels must be 0 or 1"));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Ink → +1, background → −1.
    pub fn to_spins(&self) -> SpinArray {
        SpinArray::new(self.pixels.iter().map(|&p| if p == 1 { 1 } else { -1 }).collect())
            .expect("pixels are binary")
    }

    pub fn from_spins(width: usize, height: usize, s: &SpinArray) -> Result<Self> {
        Self::new(width, height, s.as_slice().iter().map(|&v| u8::from(v > 0)).collect())
    }

    /// Plain (P2) PGM; ink is written black.
    pub fn to_pgm(&self) -> String {
        let mut out = format!("P2\n{} {}\n255\n", self.width, self.height);
        for row in self.pixels.chunks(self.width) {
            let line: Vec<&str> = row.iter().map(|&p| if p == 1 { "0" } else { "255" }).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Reads a plain PGM; values below half of maxval are ink.
    pub fn parse_pgm(text: &str, origin: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("");
            tokens.extend(body.split_whitespace().map(|t| (t, k + 1)));
        }
        let mut it = tokens.into_iter();
        match it.next() {
            Some(("P2", _)) => {}
            Some((_, line)) => return Err(Error::parse(origin, line, "expected plain PGM magic `P2`")),
            None => return Err(Error::parse(origin, 1, "empty file")),
        }
        let mut next = |what: &str| -> Result<usize> {
            let (tok, line) = it.next().ok_or_else(|| Error::parse(origin, 0, format!("missing {what}")))?;
            tok.parse().map_err(|_| Error::parse(origin, line, format!("bad {what}: `{tok}`")))
        };
        let width = next("width")?;
        let height = next("height")?;
        let maxval = next("maxval")?;
        if maxval == 0 {
            return Err(Error::parse(origin, 0, "maxval must be positive"));
        }
        let mut pixels = Vec::with_capacity(width * height);
        for _ in 0..width * height {
            let v = next("pixel")?;
            pixels.push(u8::from(2 * v < maxval));
        }
        Self::new(width, height, pixels)
    }

    pub fn load_pgm(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse_pgm(&text, &path.display().to_string())
    }
}

/// Built-in 10×10 glyph for digits 0 to 4.
pub fn digit_glyph(d: usize) -> Result<Bitmap> {
    let rows = GLYPHS
        .get(d)
        .ok_or_else(|| Error::invalid("digit", format!("no glyph for {d}; only 0 to 4 are built in")))?;
    let pixels = rows.iter().flat_map(|r| r.bytes().map(|b| u8::from(b == b'#'))).collect();
    Bitmap::new(GLYPH_SIZE, GLYPH_SIZE, pixels)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DigitInstance {
    pub graph: CouplingGraph,
    pub target: SpinArray,
    /// The composite picture the target encodes.
    pub image: Bitmap,
}

/// Tiles `bitmaps` row-major, `columns` per row (blank tiles pad the last
/// row), and couples grid neighbours with +1 where the target pixels agree
/// and −1 where they differ.
pub fn digit_instance(bitmaps: &[Bitmap], columns: usize) -> Result<DigitInstance> {
    let first = bitmaps.first().ok_or_else(|| Error::invalid("bitmaps", "none given"))?;
    if columns == 0 {
        return Err(Error::invalid("columns", "must be >= 1"));
    }
    let (bw, bh) = (first.width, first.height);
    if bitmaps.iter().any(|b| (b.width, b.height) != (bw, bh)) {
        return Err(Error::invalid("bitmaps", "all tiles must share one size"));
    }
    let cols = columns.min(bitmaps.len());
    let rows = bitmaps.len().div_ceil(cols);
    let (w, h) = (cols * bw, rows * bh);
    let mut pixels = vec![0u8; w * h];
    for (k, b) in bitmaps.iter().enumerate() {
        let (ox, oy) = ((k % cols) * bw, (k / cols) * bh);
        for y in 0..bh {
            for x in 0..bw {
                pixels[(oy + y) * w + ox + x] = b.get(x, y);
            }
        }
    }
    let image = Bitmap::new(w, h, pixels)?;
    let mut graph = CouplingGraph::new(w * h);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let mut link = |j: usize| {
                let j_ij = if image.pixels[i] == image.pixels[j] { 1 } else { -1 };
                graph.add_coupling(i, j, j_ij).expect("grid indices are valid");
            };
            if x + 1 < w {
                link(i + 1);
            }
            if y + 1 < h {
                link(i + w);
            }
        }
    }
    Ok(DigitInstance {
        target: image.to_spins(),
        graph,
        image,
    })
}
