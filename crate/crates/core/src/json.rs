//! JSON conventions: a complex number is always a `[re, im]` pair and a
//! matrix is a row-major list of rows of such pairs.

use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Rounds to 15 significant digits so that reports print stably.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.14e}", x).parse().unwrap_or(x)
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [round15(z.re), round15(z.im)]
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

/// Zeroes real or imaginary parts below `1e-14 · scale`, for reports.
pub fn chop(z: Complex64, scale: f64) -> Complex64 {
    let cut = 1e-14 * scale;
    let f = |x: f64| if x.abs() < cut { 0.0 } else { x };
    Complex64::new(f(z.re), f(z.im))
}

/// [`chop`] applied entrywise relative to the largest entry.
pub fn chop_matrix(m: &CMatrix) -> CMatrix {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    m.map(|z| chop(z, scale))
}

pub fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Option<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return None;
    }
    Some(CMatrix::from_fn(n, m, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub mod complex {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_some(&super::pair(*z))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

pub mod complex_opt {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        match z {
            Some(z) => s.serialize_some(&super::pair(*z)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Ok(Option::<[f64; 2]>::deserialize(d)?.map(|[re, im]| Complex64::new(re, im)))
    }
}

pub mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| super::pair(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        Ok(Vec::<[f64; 2]>::deserialize(d)?
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect())
    }
}

pub mod matrix {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::linalg::CMatrix;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(super::matrix_rows(m))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        super::matrix_from_rows(&rows).ok_or_else(|| serde::de::Error::custom("ragged matrix"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_fifteen_digits() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(round15(1.0 / 3.0), 0.333333333333333);
        assert_eq!(round15(-2.5e-20), -2.5e-20);
    }

    #[test]
    fn chop_drops_noise() {
        let m = CMatrix::from_fn(1, 2, |_, j| if j == 0 { Complex64::new(2.0, 3e-17) } else { Complex64::new(1e-16, 0.5) });
        let c = chop_matrix(&m);
        assert_eq!(c[(0, 0)], Complex64::new(2.0, 0.0));
        assert_eq!(c[(0, 1)], Complex64::new(0.0, 0.5));
    }

    #[test]
    fn matrix_rows_round_trip() {
        let m = CMatrix::from_fn(2, 3, |i, j| Complex64::new(i as f64, j as f64 * 0.5));
        let rows = matrix_rows(&m);
        assert_eq!(rows[1][2], [1.0, 1.0]);
        assert_eq!(matrix_from_rows(&rows).unwrap(), m);
    }
}
