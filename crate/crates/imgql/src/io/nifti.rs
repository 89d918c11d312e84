//! Minimal NIfTI-1 reader and writer.
//!
//! Handles single-file `.nii` volumes with datatype uint8, int16, uint16
//! or float32, reads `dim`, `pixdim`, `scl_slope`/`scl_inter` and the
//! data payload, and detects byte order from the header size field.
//! Orientation fields are ignored; only `pixdim` feeds the grid
//! geometry. Writing round-trips every handled field bit-exactly.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use byteorder::{BigEndian, ByteOrder, LittleEndian, WriteBytesExt};

use crate::error::{LoadError, Result};

use super::{Volume, VolumeData};

const HEADER_SIZE: usize = 348;
const VOX_OFFSET: usize = 352;
const MAGIC_NII1: &[u8; 4] = b"n+1\0";

const DT_UINT8: i16 = 2;
const DT_INT16: i16 = 4;
const DT_FLOAT32: i16 = 16;
const DT_UINT16: i16 = 512;

fn io_err(path: &Path, source: std::io::Error) -> crate::Error {
    LoadError::Io {
        path: path.to_path_buf(),
        source,
    }
    .into()
}

fn bad_header(path: &Path, reason: impl Into<String>) -> crate::Error {
    LoadError::BadHeader {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
    .into()
}

pub fn read_nifti(path: &Path) -> Result<Volume> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    if bytes.len() < HEADER_SIZE {
        return Err(bad_header(path, "file shorter than the 348-byte header"));
    }

    let little = LittleEndian::read_i32(&bytes[0..4]) == HEADER_SIZE as i32;
    let big = BigEndian::read_i32(&bytes[0..4]) == HEADER_SIZE as i32;
    if !little && !big {
        return Err(bad_header(path, "header size field is not 348"));
    }
    let rd_i16 = |off: usize| {
        if little {
            LittleEndian::read_i16(&bytes[off..off + 2])
        } else {
            BigEndian::read_i16(&bytes[off..off + 2])
        }
    };
    let rd_f32 = |off: usize| {
        if little {
            LittleEndian::read_f32(&bytes[off..off + 4])
        } else {
            BigEndian::read_f32(&bytes[off..off + 4])
        }
    };

    let magic = &bytes[344..348];
    if magic != MAGIC_NII1 && magic != b"ni1\0" {
        return Err(bad_header(path, "missing NIfTI-1 magic"));
    }

    let ndim_raw = rd_i16(40);
    if !(1..=7).contains(&ndim_raw) {
        return Err(bad_header(path, format!("implausible dim[0] = {ndim_raw}")));
    }
    let mut dims: Vec<usize> = (1..=ndim_raw as usize)
        .map(|i| rd_i16(40 + 2 * i).max(1) as usize)
        .collect();
    let mut spacing: Vec<f64> = (1..=ndim_raw as usize)
        .map(|i| {
            let p = rd_f32(76 + 4 * i);
            if p > 0.0 && p.is_finite() {
                p as f64
            } else {
                1.0
            }
        })
        .collect();
    while dims.len() > 2 && *dims.last().unwrap() == 1 {
        dims.pop();
        spacing.pop();
    }
    if !(dims.len() == 2 || dims.len() == 3) {
        return Err(bad_header(
            path,
            format!("expected a 2D or 3D volume, got dims {dims:?}"),
        ));
    }

    let datatype = rd_i16(70);
    let scl_slope = rd_f32(112);
    let scl_inter = rd_f32(116);
    let vox_offset = rd_f32(108);
    let offset = if vox_offset >= HEADER_SIZE as f32 {
        vox_offset as usize
    } else {
        VOX_OFFSET
    };

    let n: usize = dims.iter().product();
    let elem = match datatype {
        DT_UINT8 => 1,
        DT_INT16 | DT_UINT16 => 2,
        DT_FLOAT32 => 4,
        other => {
            return Err(LoadError::UnsupportedDatatype {
                path: path.to_path_buf(),
                reason: format!("code {other} (supported: uint8, int16, uint16, float32)"),
            }
            .into())
        }
    };
    let need = offset + n * elem;
    if bytes.len() < need {
        return Err(bad_header(
            path,
            format!("payload truncated: need {need} bytes, file has {}", bytes.len()),
        ));
    }
    let payload = &bytes[offset..offset + n * elem];
    let data = match datatype {
        DT_UINT8 => VolumeData::U8(payload.to_vec()),
        DT_INT16 => {
            let mut v = vec![0i16; n];
            if little {
                LittleEndian::read_i16_into(payload, &mut v);
            } else {
                BigEndian::read_i16_into(payload, &mut v);
            }
            VolumeData::I16(v)
        }
        DT_UINT16 => {
            let mut v = vec![0u16; n];
            if little {
                LittleEndian::read_u16_into(payload, &mut v);
            } else {
                BigEndian::read_u16_into(payload, &mut v);
            }
            VolumeData::U16(v)
        }
        _ => {
            let mut v = vec![0f32; n];
            if little {
                LittleEndian::read_f32_into(payload, &mut v);
            } else {
                BigEndian::read_f32_into(payload, &mut v);
            }
            VolumeData::F32(v)
        }
    };

    let mut vol = Volume::new(dims, spacing, data)?;
    if scl_slope != 0.0 && (scl_slope, scl_inter) != (1.0, 0.0) {
        vol.scale = Some((scl_slope, scl_inter));
    }
    Ok(vol)
}

/// Writes a single-file little-endian `.nii` volume.
pub fn write_nifti(path: &Path, vol: &Volume) -> Result<()> {
    let mut header = vec![0u8; VOX_OFFSET];
    LittleEndian::write_i32(&mut header[0..4], HEADER_SIZE as i32);

    let ndim = vol.dims.len();
    LittleEndian::write_i16(&mut header[40..42], ndim as i16);
    for (i, &d) in vol.dims.iter().enumerate() {
        LittleEndian::write_i16(&mut header[42 + 2 * i..44 + 2 * i], d as i16);
    }
    for i in ndim..7 {
        LittleEndian::write_i16(&mut header[42 + 2 * i..44 + 2 * i], 1);
    }

    let (datatype, bitpix) = match &vol.data {
        VolumeData::U8(_) => (DT_UINT8, 8),
        VolumeData::I16(_) => (DT_INT16, 16),
        VolumeData::U16(_) => (DT_UINT16, 16),
        VolumeData::F32(_) => (DT_FLOAT32, 32),
    };
    LittleEndian::write_i16(&mut header[70..72], datatype);
    LittleEndian::write_i16(&mut header[72..74], bitpix);

    LittleEndian::write_f32(&mut header[76..80], 1.0); // qfac
    for (i, &s) in vol.spacing.iter().enumerate() {
        LittleEndian::write_f32(&mut header[80 + 4 * i..84 + 4 * i], s as f32);
    }
    for i in ndim..7 {
        LittleEndian::write_f32(&mut header[80 + 4 * i..84 + 4 * i], 1.0);
    }

    LittleEndian::write_f32(&mut header[108..112], VOX_OFFSET as f32);
    let (slope, inter) = vol.scale.unwrap_or((0.0, 0.0));
    LittleEndian::write_f32(&mut header[112..116], slope);
    LittleEndian::write_f32(&mut header[116..120], inter);
    header[123] = 2; // spatial units: millimetres
    header[344..348].copy_from_slice(MAGIC_NII1);

    let mut out = Vec::with_capacity(VOX_OFFSET + vol.len() * 4);
    out.write_all(&header).unwrap();
    match &vol.data {
        VolumeData::U8(v) => out.write_all(v).unwrap(),
        VolumeData::I16(v) => {
            for &x in v {
                out.write_i16::<LittleEndian>(x).unwrap();
            }
        }
        VolumeData::U16(v) => {
            for &x in v {
                out.write_u16::<LittleEndian>(x).unwrap();
            }
        }
        VolumeData::F32(v) => {
            for &x in v {
                out.write_f32::<LittleEndian>(x).unwrap();
            }
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}
