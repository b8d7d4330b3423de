//! Closed connected surfaces, classified by orientability and genus.

use std::fmt;
use std::str::FromStr;

use crate::error::ParseError;

/// `O<g>` is the orientable surface of genus `g`, `N<g>` (g >= 1) the
/// connected sum of `g` projective planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Surface {
    orientable: bool,
    genus: u32,
}

impl Surface {
    pub const SPHERE: Surface = Surface {
        orientable: true,
        genus: 0,
    };
    pub const TORUS: Surface = Surface {
        orientable: true,
        genus: 1,
    };
    pub const PROJECTIVE_PLANE: Surface = Surface {
        orientable: false,
        genus: 1,
    };

    pub fn orientable(genus: u32) -> Self {
        Surface {
            orientable: true,
            genus,
        }
    }

    /// Returns `None` for genus 0, which has no non-orientable surface.
    pub fn non_orientable(genus: u32) -> Option<Self> {
        (genus >= 1).then_some(Surface {
            orientable: false,
            genus,
        })
    }

    /// The surface with the given orientability and Euler characteristic, if any.
    pub fn from_euler(orientable: bool, chi: i64) -> Option<Self> {
        if orientable {
            if chi > 2 || chi % 2 != 0 {
                return None;
            }
            Some(Surface::orientable(((2 - chi) / 2) as u32))
        } else {
            if chi > 1 {
                return None;
            }
            Surface::non_orientable((2 - chi) as u32)
        }
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn euler_characteristic(&self) -> i64 {
        if self.orientable {
            2 - 2 * self.genus as i64
        } else {
            2 - self.genus as i64
        }
    }

    pub fn is_sphere(&self) -> bool {
        *self == Surface::SPHERE
    }

    pub fn is_projective_plane(&self) -> bool {
        *self == Surface::PROJECTIVE_PLANE
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.orientable { 'O' } else { 'N' };
        write!(f, "{tag}{}", self.genus)
    }
}

impl FromStr for Surface {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::new(format!("bad surface `{s}` (expected O<g> or N<g>)"));
        let (head, digits) = s.split_at_checked(1).ok_or_else(bad)?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let genus: u32 = digits.parse().map_err(|_| bad())?;
        match head {
            "O" => Ok(Surface::orientable(genus)),
            "N" => Surface::non_orientable(genus).ok_or_else(bad),
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristics() {
        assert_eq!(Surface::SPHERE.euler_characteristic(), 2);
        assert_eq!(Surface::TORUS.euler_characteristic(), 0);
        assert_eq!(Surface::PROJECTIVE_PLANE.euler_characteristic(), 1);
        assert_eq!(Surface::non_orientable(2).unwrap().euler_characteristic(), 0);
        assert_eq!(Surface::orientable(3).euler_characteristic(), -4);
    }

    #[test]
    fn from_euler_roundtrip() {
        for g in 0..6 {
            let s = Surface::orientable(g);
            assert_eq!(Surface::from_euler(true, s.euler_characteristic()), Some(s));
        }
        for g in 1..6 {
            let s = Surface::non_orientable(g).unwrap();
            assert_eq!(Surface::from_euler(false, s.euler_characteristic()), Some(s));
        }
        assert_eq!(Surface::from_euler(true, 1), None);
        assert_eq!(Surface::from_euler(true, 4), None);
        assert_eq!(Surface::from_euler(false, 2), None);
    }

    #[test]
    fn parse() {
        assert_eq!("O0".parse::<Surface>().unwrap(), Surface::SPHERE);
        assert_eq!("N1".parse::<Surface>().unwrap(), Surface::PROJECTIVE_PLANE);
        assert_eq!("O12".parse::<Surface>().unwrap().genus(), 12);
        for bad in ["N0", "X1", "O", "", "O-1", "O+1", "o1"] {
            assert!(bad.parse::<Surface>().is_err(), "{bad}");
        }
        assert_eq!(Surface::non_orientable(3).unwrap().to_string(), "N3");
    }
}
