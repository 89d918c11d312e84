//! Grayscale PNG input and RGB overlay output.
//!
//! A grayscale PNG loads as a 2D volume with unit spacing; 8- and 16-bit
//! images widen to the same integer values with no rescaling. Overlays
//! alpha-blend label colors at 50% over the grayscale base.

use std::path::Path;

use image::{DynamicImage, GrayImage, ImageReader, Rgb, RgbImage};

use crate::error::{LoadError, Result};

use super::{label_color, Volume, VolumeData};

pub fn read_gray_png(path: &Path) -> Result<Volume> {
    let img = ImageReader::open(path)
        .map_err(|e| LoadError::Io {
            path: path.to_path_buf(),
            source: e,
        })?
        .decode()
        .map_err(|e| LoadError::Image {
            path: path.to_path_buf(),
            source: e,
        })?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = match img {
        DynamicImage::ImageLuma8(buf) => VolumeData::U8(buf.into_raw()),
        DynamicImage::ImageLuma16(buf) => VolumeData::U16(buf.into_raw()),
        other => {
            return Err(LoadError::UnsupportedDatatype {
                path: path.to_path_buf(),
                reason: format!("{:?} (expected 8- or 16-bit grayscale)", other.color()),
            }
            .into())
        }
    };
    Volume::new(vec![w, h], vec![1.0, 1.0], data)
}

/// Renders a 2D label overlay: the base channel is min-max normalised to
/// gray, and labelled points are blended half-and-half with the palette
/// color of their label.
pub fn write_overlay_png(
    path: &Path,
    dims: &[usize],
    base: &[f64],
    labels: &[u16],
) -> Result<()> {
    assert_eq!(dims.len(), 2, "overlays are for 2D volumes only");
    let (w, h) = (dims[0], dims[1]);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in base {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    let gray = GrayImage::from_fn(w as u32, h as u32, |x, y| {
        let v = base[y as usize * w + x as usize];
        image::Luma([(255.0 * (v - lo) / span).clamp(0.0, 255.0) as u8])
    });
    let rgb = RgbImage::from_fn(w as u32, h as u32, |x, y| {
        let idx = y as usize * w + x as usize;
        let g = gray.get_pixel(x, y)[0] as u16;
        match labels[idx] {
            0 => Rgb([g as u8; 3]),
            label => {
                let c = label_color(label);
                Rgb([
                    ((g + c[0] as u16) / 2) as u8,
                    ((g + c[1] as u16) / 2) as u8,
                    ((g + c[2] as u16) / 2) as u8,
                ])
            }
        }
    });
    rgb.save(path).map_err(|e| {
        crate::Error::from(LoadError::Image {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eight_bit_values_widen_without_rescaling() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        let img = GrayImage::from_fn(4, 3, |x, y| image::Luma([(x * 80 + y) as u8]));
        img.save(&p).unwrap();
        let vol = read_gray_png(&p).unwrap();
        assert_eq!(vol.dims, vec![4, 3]);
        assert_eq!(vol.spacing, vec![1.0, 1.0]);
        let vals = vol.attribute_values();
        assert_eq!(vals[0], 0.0);
        assert_eq!(vals[3], 240.0);
        // a 255-valued pixel stays 255.0
        let img = GrayImage::from_fn(2, 2, |_, _| image::Luma([255]));
        img.save(&p).unwrap();
        assert_eq!(read_gray_png(&p).unwrap().attribute_values(), vec![255.0; 4]);
    }

    #[test]
    fn rgb_png_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.png");
        let img = RgbImage::from_fn(2, 2, |x, _| Rgb([x as u8 * 100, 0, 9]));
        img.save(&p).unwrap();
        assert!(read_gray_png(&p).is_err());
    }

    #[test]
    fn overlay_blends_labels() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("o.png");
        let base = vec![0.0, 1.0, 2.0, 3.0];
        let labels = vec![0, 8, 0, 7];
        write_overlay_png(&p, &[2, 2], &base, &labels).unwrap();
        let img = image::open(&p).unwrap().into_rgb8();
        assert_eq!(img.get_pixel(0, 0).0, [0, 0, 0]); // unlabeled, darkest
        let red = img.get_pixel(1, 0).0;
        assert!(red[0] > red[1] && red[0] > red[2]);
        let green = img.get_pixel(1, 1).0;
        assert!(green[1] > green[0] && green[1] > green[2]);
    }
}
