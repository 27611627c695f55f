use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Grid or image dimensions are zero, inconsistent, or too small.
    Dimension(&'static str),
    /// A numeric parameter is outside its admissible range.
    Parameter(&'static str),
    /// A mask image contains a value other than 0 or 255.
    MaskValue { x: usize, y: usize, value: f64 },
    /// Every weight in an extrapolation area is zero.
    DegenerateArea,
    /// The mask marks no sample as lost.
    NothingToConceal,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension(msg) => write!(f, "dimension error: {msg}"),
            Error::Parameter(msg) => write!(f, "parameter error: {msg}"),
            Error::MaskValue { x, y, value } => {
                write!(f, "mask value {value} at ({x}, {y}) is neither 0 nor 255")
            }
            Error::DegenerateArea => f.write_str("extrapolation area has no usable samples"),
            Error::NothingToConceal => f.write_str("mask contains no lost samples"),
        }
    }
}

impl core::error::Error for Error {}
