//! The 2x2 sort underlying the four sub-portfolios: zaibatsu affiliation
//! crossed with military orientation.

/// One cell of the 2x2 sort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    /// Zaibatsu, military.
    Zm,
    /// Zaibatsu, non-military.
    Zn,
    /// Non-zaibatsu, military.
    Nm,
    /// Non-zaibatsu, non-military.
    Nn,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::Zm, Group::Zn, Group::Nm, Group::Nn];

    pub fn zaibatsu(self) -> bool {
        matches!(self, Group::Zm | Group::Zn)
    }

    pub fn military(self) -> bool {
        matches!(self, Group::Zm | Group::Nm)
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Zm => "zm",
            Group::Zn => "zn",
            Group::Nm => "nm",
            Group::Nn => "nn",
        }
    }

    pub fn from_flags(zaibatsu: bool, military: bool) -> Group {
        match (zaibatsu, military) {
            (true, true) => Group::Zm,
            (true, false) => Group::Zn,
            (false, true) => Group::Nm,
            (false, false) => Group::Nn,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Group::Zm => 0,
            Group::Zn => 1,
            Group::Nm => 2,
            Group::Nn => 3,
        }
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zm" => Ok(Group::Zm),
            "zn" => Ok(Group::Zn),
            "nm" => Ok(Group::Nm),
            "nn" => Ok(Group::Nn),
            other => Err(format!("unknown group `{other}`")),
        }
    }
}
