//! Byte layout. All integers little-endian.
//!
//! | offset | size | field                         | formats       |
//! |-------:|-----:|-------------------------------|---------------|
//! |      0 |    1 | format tag                    | all           |
//! |      1 |   20 | uav id                        | all           |
//! |     21 |    4 | east, i32 cm                  | all           |
//! |     25 |    4 | north, i32 cm                 | all           |
//! |     29 |    4 | altitude, i32 cm              | all           |
//! |     33 |    2 | speed, u16 cm/s               | all           |
//! |     35 |    1 | emergency, 0 or 1             | all           |
//! |     36 |    4 | time mark, u32 ms             | all           |
//! |     40 |    4 | control station east, i32 cm  | all           |
//! |     44 |    4 | control station north, i32 cm | all           |
//! |     48 |    4 | control station alt, i32 cm   | all           |
//! |     52 |    2 | af size, u16 cm in [1, 750]   | C2, C3        |
//! |  52/54 |    2 | loc error, u16 cm             | C1, C2, C3    |
//! |     56 |    4 | heading, u32 1e-4 rad < 62832 | C3            |
//! |     60 |    2 | reserved, zero                | C3            |
//!
//! Lengths: standard 52, C1 54, C2 56, C3 62.

use thiserror::Error;

use super::{Extensions, RemoteIdMessage, AF_SIZE_MAX_CM, HEADING_LIMIT};
use crate::geometry::MessageFormat;

const STANDARD_LEN: usize = 52;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Tag,
    Emergency,
    AfSize,
    LocError,
    Heading,
    Reserved,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("buffer too short at offset {offset}: need {needed} bytes, have {available}")]
    ShortBuffer {
        offset: usize,
        needed: usize,
        available: usize,
    },
    #[error("unknown format tag {tag:#04x} at offset {offset}")]
    UnknownTag { offset: usize, tag: u8 },
    #[error("field {field:?} out of range at offset {offset}")]
    OutOfRange { offset: usize, field: Field },
    #[error("format {format} requires field {field:?}")]
    MissingField { format: MessageFormat, field: Field },
    #[error("format {format} does not carry field {field:?}")]
    UnexpectedField { format: MessageFormat, field: Field },
    #[error("format {0} has no broadcast encoding")]
    Unsupported(MessageFormat),
}

fn tag_of(format: MessageFormat) -> Result<u8, CodecError> {
    match format {
        MessageFormat::StandardRemoteId => Ok(0),
        MessageFormat::Candidate1 => Ok(1),
        MessageFormat::Candidate2 => Ok(2),
        MessageFormat::Candidate3 => Ok(3),
        MessageFormat::PerfectKnowledge => Err(CodecError::Unsupported(format)),
    }
}

fn format_of(tag: u8) -> Option<MessageFormat> {
    match tag {
        0 => Some(MessageFormat::StandardRemoteId),
        1 => Some(MessageFormat::Candidate1),
        2 => Some(MessageFormat::Candidate2),
        3 => Some(MessageFormat::Candidate3),
        _ => None,
    }
}

/// Encoded length of `format`, a pure function of the tag.
pub fn encoded_len(format: MessageFormat) -> Result<usize, CodecError> {
    let ext = Extensions::of(format).ok_or(CodecError::Unsupported(format))?;
    Ok(STANDARD_LEN
        + if ext.af_size { 2 } else { 0 }
        + if ext.loc_error { 2 } else { 0 }
        + if ext.heading { 6 } else { 0 })
}

fn check_presence<T>(
    format: MessageFormat,
    field: Field,
    value: Option<T>,
    wanted: bool,
) -> Result<Option<T>, CodecError> {
    match (value, wanted) {
        (Some(v), true) => Ok(Some(v)),
        (None, false) => Ok(None),
        (None, true) => Err(CodecError::MissingField { format, field }),
        (Some(_), false) => Err(CodecError::UnexpectedField { format, field }),
    }
}

pub fn encode(msg: &RemoteIdMessage) -> Result<Vec<u8>, CodecError> {
    let tag = tag_of(msg.format)?;
    let ext = Extensions::of(msg.format).ok_or(CodecError::Unsupported(msg.format))?;
    let af = check_presence(msg.format, Field::AfSize, msg.af_size_cm, ext.af_size)?;
    let loc = check_presence(msg.format, Field::LocError, msg.loc_error_cm, ext.loc_error)?;
    let heading = check_presence(msg.format, Field::Heading, msg.heading, ext.heading)?;

    let mut out = Vec::with_capacity(encoded_len(msg.format)?);
    out.push(tag);
    out.extend_from_slice(&msg.uav_id);
    out.extend_from_slice(&msg.position_cm.0.to_le_bytes());
    out.extend_from_slice(&msg.position_cm.1.to_le_bytes());
    out.extend_from_slice(&msg.altitude_cm.to_le_bytes());
    out.extend_from_slice(&msg.speed_cm_s.to_le_bytes());
    out.push(u8::from(msg.emergency));
    out.extend_from_slice(&msg.time_mark_ms.to_le_bytes());
    out.extend_from_slice(&msg.control_station_cm.0.to_le_bytes());
    out.extend_from_slice(&msg.control_station_cm.1.to_le_bytes());
    out.extend_from_slice(&msg.control_station_cm.2.to_le_bytes());
    if let Some(af) = af {
        if af == 0 || af > AF_SIZE_MAX_CM {
            return Err(CodecError::OutOfRange {
                offset: out.len(),
                field: Field::AfSize,
            });
        }
        out.extend_from_slice(&af.to_le_bytes());
    }
    if let Some(loc) = loc {
        out.extend_from_slice(&loc.to_le_bytes());
    }
    if let Some(h) = heading {
        if h >= HEADING_LIMIT {
            return Err(CodecError::OutOfRange {
                offset: out.len(),
                field: Field::Heading,
            });
        }
        out.extend_from_slice(&h.to_le_bytes());
        out.extend_from_slice(&[0, 0]);
    }
    Ok(out)
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], CodecError> {
        let end = self.pos + N;
        let bytes = self.buf.get(self.pos..end).ok_or(CodecError::ShortBuffer {
            offset: self.pos,
            needed: N,
            available: self.buf.len().saturating_sub(self.pos),
        })?;
        self.pos = end;
        Ok(bytes.try_into().expect("slice length"))
    }

    fn u8(&mut self) -> Result<u8, CodecError> {
        Ok(self.take::<1>()?[0])
    }

    fn u16(&mut self) -> Result<u16, CodecError> {
        Ok(u16::from_le_bytes(self.take()?))
    }

    fn u32(&mut self) -> Result<u32, CodecError> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn i32(&mut self) -> Result<i32, CodecError> {
        Ok(i32::from_le_bytes(self.take()?))
    }
}

/// Parses one message from the front of `buf`, returning it with the number
/// of bytes consumed. Trailing bytes are left untouched.
pub fn decode(buf: &[u8]) -> Result<(RemoteIdMessage, usize), CodecError> {
    let mut r = Reader { buf, pos: 0 };
    let tag = r.u8()?;
    let format = format_of(tag).ok_or(CodecError::UnknownTag { offset: 0, tag })?;
    let ext = Extensions::of(format).ok_or(CodecError::Unsupported(format))?;
    let uav_id = r.take::<20>()?;
    let position_cm = (r.i32()?, r.i32()?);
    let altitude_cm = r.i32()?;
    let speed_cm_s = r.u16()?;
    let em_offset = r.pos;
    let emergency = match r.u8()? {
        0 => false,
        1 => true,
        _ => {
            return Err(CodecError::OutOfRange {
                offset: em_offset,
                field: Field::Emergency,
            })
        }
    };
    let time_mark_ms = r.u32()?;
    let control_station_cm = (r.i32()?, r.i32()?, r.i32()?);
    let af_size_cm = if ext.af_size {
        let offset = r.pos;
        let v = r.u16()?;
        if v == 0 || v > AF_SIZE_MAX_CM {
            return Err(CodecError::OutOfRange {
                offset,
                field: Field::AfSize,
            });
        }
        Some(v)
    } else {
        None
    };
    let loc_error_cm = if ext.loc_error { Some(r.u16()?) } else { None };
    let heading = if ext.heading {
        let offset = r.pos;
        let v = r.u32()?;
        if v >= HEADING_LIMIT {
            return Err(CodecError::OutOfRange {
                offset,
                field: Field::Heading,
            });
        }
        let offset = r.pos;
        if r.take::<2>()? != [0, 0] {
            return Err(CodecError::OutOfRange {
                offset,
                field: Field::Reserved,
            });
        }
        Some(v)
    } else {
        None
    };
    let msg = RemoteIdMessage {
        format,
        uav_id,
        position_cm,
        altitude_cm,
        speed_cm_s,
        emergency,
        time_mark_ms,
        control_station_cm,
        af_size_cm,
        loc_error_cm,
        heading,
    };
    Ok((msg, r.pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const ENCODABLE: [MessageFormat; 4] = [
        MessageFormat::StandardRemoteId,
        MessageFormat::Candidate1,
        MessageFormat::Candidate2,
        MessageFormat::Candidate3,
    ];

    #[test]
    fn lengths_follow_layout() {
        assert_eq!(encoded_len(MessageFormat::StandardRemoteId).unwrap(), 52);
        assert_eq!(encoded_len(MessageFormat::Candidate1).unwrap(), 54);
        assert_eq!(encoded_len(MessageFormat::Candidate2).unwrap(), 56);
        assert_eq!(encoded_len(MessageFormat::Candidate3).unwrap(), 62);
        assert!(encoded_len(MessageFormat::PerfectKnowledge).is_err());
    }

    #[test]
    fn zero_standard_message() {
        let bytes = encode(&RemoteIdMessage::empty(MessageFormat::StandardRemoteId)).unwrap();
        assert_eq!(bytes.len(), 52);
        assert!(bytes.iter().all(|&b| b == 0));
    }

    #[test]
    fn candidate3_six_bytes_longer_than_candidate2() {
        let c2 = encode(&RemoteIdMessage::empty(MessageFormat::Candidate2)).unwrap();
        let c3 = encode(&RemoteIdMessage::empty(MessageFormat::Candidate3)).unwrap();
        assert_eq!(c3.len(), c2.len() + 6);
    }

    #[test]
    fn rejects_misplaced_extensions() {
        let mut m = RemoteIdMessage::empty(MessageFormat::Candidate1);
        m.heading = Some(10);
        assert_eq!(
            encode(&m),
            Err(CodecError::UnexpectedField {
                format: MessageFormat::Candidate1,
                field: Field::Heading
            })
        );
        let mut m = RemoteIdMessage::empty(MessageFormat::Candidate2);
        m.af_size_cm = None;
        assert!(matches!(encode(&m), Err(CodecError::MissingField { .. })));
        let mut m = RemoteIdMessage::empty(MessageFormat::Candidate3);
        m.heading = Some(HEADING_LIMIT);
        assert!(matches!(
            encode(&m),
            Err(CodecError::OutOfRange {
                field: Field::Heading,
                offset: 56
            })
        ));
        let mut m = RemoteIdMessage::empty(MessageFormat::Candidate2);
        m.af_size_cm = Some(751);
        assert!(encode(&m).is_err());
        assert!(encode(&RemoteIdMessage::empty(MessageFormat::PerfectKnowledge)).is_err());
    }

    #[test]
    fn decode_errors_name_offsets() {
        assert_eq!(
            decode(&[]),
            Err(CodecError::ShortBuffer {
                offset: 0,
                needed: 1,
                available: 0
            })
        );
        assert_eq!(
            decode(&[9]),
            Err(CodecError::UnknownTag { offset: 0, tag: 9 })
        );
        let mut b = encode(&RemoteIdMessage::empty(MessageFormat::StandardRemoteId)).unwrap();
        b[35] = 2;
        assert_eq!(
            decode(&b),
            Err(CodecError::OutOfRange {
                offset: 35,
                field: Field::Emergency
            })
        );
        let mut b = encode(&RemoteIdMessage::empty(MessageFormat::Candidate3)).unwrap();
        b[61] = 1;
        assert_eq!(
            decode(&b),
            Err(CodecError::OutOfRange {
                offset: 60,
                field: Field::Reserved
            })
        );
        let b = encode(&RemoteIdMessage::empty(MessageFormat::Candidate3)).unwrap();
        assert!(matches!(
            decode(&b[..58]),
            Err(CodecError::ShortBuffer { offset: 56, .. })
        ));
    }

    #[test]
    fn trailing_bytes_reported() {
        let m = RemoteIdMessage::empty(MessageFormat::Candidate1);
        let mut b = encode(&m).unwrap();
        b.extend_from_slice(&[0xAA, 0xBB, 0xCC]);
        let (d, used) = decode(&b).unwrap();
        assert_eq!(d, m);
        assert_eq!(used, 54);
    }

    pub(crate) fn arb_message() -> impl Strategy<Value = RemoteIdMessage> {
        (
            0usize..4,
            any::<[u8; 20]>(),
            any::<(i32, i32, i32)>(),
            any::<u16>(),
            any::<bool>(),
            any::<u32>(),
            any::<(i32, i32, i32)>(),
            1u16..=AF_SIZE_MAX_CM,
            any::<u16>(),
            0u32..HEADING_LIMIT,
        )
            .prop_map(|(f, id, (e, n, alt), sp, em, tm, cs, af, loc, hd)| {
                let format = ENCODABLE[f];
                let ext = Extensions::of(format).unwrap();
                RemoteIdMessage {
                    format,
                    uav_id: id,
                    position_cm: (e, n),
                    altitude_cm: alt,
                    speed_cm_s: sp,
                    emergency: em,
                    time_mark_ms: tm,
                    control_station_cm: cs,
                    af_size_cm: ext.af_size.then_some(af),
                    loc_error_cm: ext.loc_error.then_some(loc),
                    heading: ext.heading.then_some(hd),
                }
            })
    }

    proptest! {
        #[test]
        fn round_trip(m in arb_message()) {
            let b = encode(&m).unwrap();
            prop_assert_eq!(b.len(), encoded_len(m.format).unwrap());
            let (d, used) = decode(&b).unwrap();
            prop_assert_eq!(used, b.len());
            prop_assert_eq!(d, m);
        }

        #[test]
        fn decode_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..80)) {
            if let Ok((m, used)) = decode(&bytes) {
                prop_assert!(used <= bytes.len());
                prop_assert_eq!(encode(&m).unwrap(), bytes[..used].to_vec());
            }
        }
    }
}
