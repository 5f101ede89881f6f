use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::{ByteImage, ByteplotError, Result};

fn png_err(e: impl std::fmt::Display) -> ByteplotError {
    ByteplotError::Format(e.to_string())
}

/// Writes an 8-bit, single-channel, non-interlaced PNG.
pub fn export_png(img: &ByteImage, path: &Path) -> Result<()> {
    let file = File::create(path)?;
    let mut w = BufWriter::new(file);
    write_png(img, &mut w)?;
    w.flush()?;
    Ok(())
}

pub(crate) fn write_png<W: Write>(img: &ByteImage, w: W) -> Result<()> {
    let mut encoder = png::Encoder::new(w, img.width() as u32, img.height() as u32);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(png_err)?;
    writer.write_image_data(img.pixels()).map_err(png_err)?;
    writer.finish().map_err(png_err)?;
    Ok(())
}

/// Reads an 8-bit grayscale PNG; anything else is a `Format` error.
pub fn import_png(path: &Path) -> Result<ByteImage> {
    let file = File::open(path)?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let mut reader = decoder.read_info().map_err(png_err)?;
    let (color, depth) = {
        let info = reader.info();
        (info.color_type, info.bit_depth)
    };
    if color != png::ColorType::Grayscale || depth != png::BitDepth::Eight {
        return Err(ByteplotError::Format(format!("expected 8-bit grayscale, found {color:?} at {depth:?}")));
    }
    let size = reader.output_buffer_size().ok_or_else(|| ByteplotError::Format("image too large".into()))?;
    let mut buf = vec![0u8; size];
    let frame = reader.next_frame(&mut buf).map_err(png_err)?;
    let (w, h) = (frame.width as usize, frame.height as usize);
    let mut pixels = Vec::with_capacity(w * h);
    for row in buf.chunks(frame.line_size).take(h) {
        pixels.extend_from_slice(&row[..w]);
    }
    ByteImage::from_raw(w, h, pixels)
}
