use serde::{Deserialize, Serialize};

/// Outcome of a check. A failed hypothesis is never reported as a pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Verdict of a check that only runs when `hypothesis` holds.
    pub fn guarded(hypothesis: bool, ok: bool) -> Self {
        if hypothesis {
            Self::from_bool(ok)
        } else {
            Verdict::NotApplicable
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not_applicable",
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }

    /// Any failure fails; otherwise pass if anything passed.
    pub fn combine(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let mut seen_pass = false;
        let mut seen_any = false;
        for v in verdicts {
            seen_any = true;
            match v {
                Verdict::Fail => return Verdict::Fail,
                Verdict::Pass => seen_pass = true,
                Verdict::NotApplicable => {}
            }
        }
        if seen_pass || !seen_any {
            Verdict::Pass
        } else {
            Verdict::NotApplicable
        }
    }

    /// 0 = pass, 1 = failure, 2 = not applicable only.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::NotApplicable => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_rules() {
        use Verdict::*;
        assert_eq!(Verdict::combine([Pass, NotApplicable]), Pass);
        assert_eq!(Verdict::combine([Pass, Fail, NotApplicable]), Fail);
        assert_eq!(Verdict::combine([NotApplicable, NotApplicable]), NotApplicable);
        assert_eq!(Verdict::guarded(false, true), NotApplicable);
        assert_eq!(NotApplicable.exit_code(), 2);
    }
}
