//! Embedded EU27 datasets (populations on 1 January 2011).
//!
//! The status-quo and parabolic compositions are comparison data only; they
//! are not computed by this crate.

use crate::model::{MemberState, Roster};

/// Code, name, population, status-quo seats, parabolic-allotment seats.
const EU27: [(&str, &str, u64, u32, u32); 27] = [
    ("DE", "Germany", 81_802_257, 99, 96),
    ("FR", "France", 64_714_074, 74, 80),
    ("UK", "United Kingdom", 62_008_048, 73, 78),
    ("IT", "Italy", 60_340_328, 73, 76),
    ("ES", "Spain", 45_989_016, 54, 61),
    ("PL", "Poland", 38_167_329, 51, 52),
    ("RO", "Romania", 21_462_186, 33, 33),
    ("NL", "Netherlands", 16_574_989, 26, 27),
    ("EL", "Greece", 11_305_118, 22, 20),
    ("BE", "Belgium", 10_839_905, 22, 20),
    ("PT", "Portugal", 10_637_713, 22, 19),
    ("CZ", "Czech Republic", 10_506_813, 22, 19),
    ("HU", "Hungary", 10_014_324, 22, 19),
    ("SE", "Sweden", 9_340_682, 20, 18),
    ("AT", "Austria", 8_375_290, 19, 16),
    ("BG", "Bulgaria", 7_563_710, 18, 15),
    ("DK", "Denmark", 5_534_738, 13, 13),
    ("SK", "Slovakia", 5_424_925, 13, 13),
    ("FI", "Finland", 5_351_427, 13, 13),
    ("IE", "Ireland", 4_467_854, 12, 11),
    ("LT", "Lithuania", 3_329_039, 12, 10),
    ("LV", "Latvia", 2_248_374, 9, 8),
    ("SI", "Slovenia", 2_046_976, 8, 8),
    ("EE", "Estonia", 1_340_127, 6, 7),
    ("CY", "Cyprus", 803_147, 6, 7),
    ("LU", "Luxembourg", 502_066, 6, 6),
    ("MT", "Malta", 412_970, 6, 6),
];

/// The 27 member states of 1.1.2011.
pub fn eu27() -> Roster {
    Roster::new(
        EU27.iter()
            .map(|&(code, name, population, _, _)| MemberState::new(code, name, population))
            .collect(),
    )
    .expect("embedded roster is valid")
}

/// A static composition keyed by state code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticComposition {
    /// Seats in force at the time of the 2011 populations (754 seats).
    StatusQuo,
    /// Parabolic allotment, retained for comparison.
    Parabolic,
}

impl StaticComposition {
    pub fn label(self) -> &'static str {
        match self {
            StaticComposition::StatusQuo => "Now",
            StaticComposition::Parabolic => "Par.",
        }
    }

    /// Seats for `code`, if the dataset covers it.
    pub fn seats_for(self, code: &str) -> Option<u32> {
        EU27.iter().find(|row| row.0 == code).map(|row| match self {
            StaticComposition::StatusQuo => row.3,
            StaticComposition::Parabolic => row.4,
        })
    }

    /// Seats aligned with `roster`; `None` if any state is not covered.
    pub fn aligned(self, roster: &Roster) -> Option<Vec<u32>> {
        roster
            .states()
            .iter()
            .map(|s| self.seats_for(&s.code))
            .collect()
    }
}
