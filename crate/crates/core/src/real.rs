// Real-valued math that has to work without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `|re| + |im|`, the cheap norm used for deflation tests.
#[inline]
pub(crate) fn abs1(z: num_complex::Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}
