//! Single-qubit Clifford data: each site operator is recorded by the images
//! of X and Z under conjugation, which is exactly the information needed to
//! push a tableau through a local layer with exact phases.

use std::fmt;
use std::sync::OnceLock;

use crate::stab::tableau::{PauliGen, StabError, StabilizerTableau};

/// A single-site Pauli word i^{ph} X^x Z^z.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct SitePauli {
    pub ph: u8, // i-exponent mod 4
    pub x: bool,
    pub z: bool,
}

impl SitePauli {
    pub const IDENTITY: SitePauli = SitePauli { ph: 0, x: false, z: false };

    #[must_use]
    pub fn new(ph: u8, x: bool, z: bool) -> Self {
        Self { ph: ph % 4, x, z }
    }

    /// Product with the canonical-order phase rule: Z·X = −X·Z.
    #[must_use]
    pub fn mul(self, other: SitePauli) -> SitePauli {
        let ph = (self.ph + other.ph + 2 * u8::from(self.z & other.x)) % 4;
        SitePauli { ph, x: self.x ^ other.x, z: self.z ^ other.z }
    }

    /// Hermitian involution: phase parity equals the X/Z overlap.
    #[must_use]
    pub fn is_involution(self) -> bool {
        (self.ph & 1) == u8::from(self.x & self.z)
    }

    fn letter(self) -> char {
        match (self.x, self.z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    fn sign_str(self) -> &'static str {
        // render with Y = i X Z absorbed into the letter
        let eff = (self.ph + 4 - u8::from(self.x & self.z)) % 4;
        match eff {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        }
    }
}

impl fmt::Display for SitePauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sign_str(), self.letter())
    }
}

/// A single-qubit Clifford, stored as the conjugation images of X and Z.
/// There are 24 of them: 6 symplectic classes times 4 Pauli corrections.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct SingleClifford {
    img_x: SitePauli,
    img_z: SitePauli,
}

impl SingleClifford {
    pub const IDENTITY: SingleClifford = SingleClifford {
        img_x: SitePauli { ph: 0, x: true, z: false },
        img_z: SitePauli { ph: 0, x: false, z: true },
    };

    #[must_use]
    pub fn hadamard() -> Self {
        Self {
            img_x: SitePauli::new(0, false, true),
            img_z: SitePauli::new(0, true, false),
        }
    }

    #[must_use]
    pub fn phase_gate() -> Self {
        // S X S† = Y = i X Z, S Z S† = Z
        Self {
            img_x: SitePauli::new(1, true, true),
            img_z: SitePauli::new(0, false, true),
        }
    }

    #[must_use]
    pub fn pauli(z_correction: bool, x_correction: bool) -> Self {
        // conjugation by Z^a X^b: X ↦ (−1)^a X, Z ↦ (−1)^b Z
        Self {
            img_x: SitePauli::new(if z_correction { 2 } else { 0 }, true, false),
            img_z: SitePauli::new(if x_correction { 2 } else { 0 }, false, true),
        }
    }

    /// Build from a symplectic block [[a,b],[c,d]] with ad + bc = 1 over F₂
    /// (action (x,z) ↦ (ax+bz, cx+dz)), with the +Y phase convention.
    #[must_use]
    pub fn from_symplectic(a: bool, b: bool, c: bool, d: bool) -> Option<Self> {
        if (a & d) ^ (b & c) {
            let img_x = SitePauli::new(u8::from(a & c), a, c);
            let img_z = SitePauli::new(u8::from(b & d), b, d);
            Some(Self { img_x, img_z })
        } else {
            None
        }
    }

    /// (a, b, c, d) of the symplectic block.
    #[must_use]
    pub fn symplectic(self) -> (bool, bool, bool, bool) {
        (self.img_x.x, self.img_z.x, self.img_x.z, self.img_z.z)
    }

    #[must_use]
    pub fn image_of_x(self) -> SitePauli {
        self.img_x
    }

    #[must_use]
    pub fn image_of_z(self) -> SitePauli {
        self.img_z
    }

    #[must_use]
    pub fn is_valid(self) -> bool {
        self.img_x.is_involution()
            && self.img_z.is_involution()
            && ((self.img_x.x & self.img_z.z) ^ (self.img_x.z & self.img_z.x)) // anticommute
    }

    /// Image of an arbitrary site word under this conjugation.
    #[must_use]
    pub fn apply_site(self, p: SitePauli) -> SitePauli {
        let mut out = SitePauli::new(p.ph, false, false);
        if p.x {
            out = out.mul(self.img_x);
        }
        if p.z {
            out = out.mul(self.img_z);
        }
        out
    }

    /// The map "self first, then `then`".
    #[must_use]
    pub fn then(self, then: SingleClifford) -> SingleClifford {
        SingleClifford {
            img_x: then.apply_site(self.img_x),
            img_z: then.apply_site(self.img_z),
        }
    }

    /// Group inverse, resolved against the 24-element table.
    #[must_use]
    pub fn inverse(self) -> SingleClifford {
        *group_table()
            .iter()
            .find(|e| self.then(**e) == SingleClifford::IDENTITY)
            .expect("every single-qubit Clifford has an inverse in the table")
    }

    /// Short name: symplectic word plus Pauli correction, e.g. "HS·Z".
    #[must_use]
    pub fn name(self) -> String {
        let word = match self.symplectic() {
            (true, false, false, true) => "I",
            (false, true, true, false) => "H",
            (true, false, true, true) => "S",
            (true, true, false, true) => "HSH",
            (false, true, true, true) => "SH",
            (true, true, true, false) => "HS",
            _ => unreachable!("six symplectic classes"),
        };
        // divide out the bare symplectic representative to find the Pauli part
        let (a, b, c, d) = self.symplectic();
        let bare = SingleClifford::from_symplectic(a, b, c, d).expect("valid block");
        let x_flip = self.img_x.ph != bare.img_x.ph;
        let z_flip = self.img_z.ph != bare.img_z.ph;
        let pauli = match (x_flip, z_flip) {
            (false, false) => "",
            (true, false) => "·Z",
            (false, true) => "·X",
            (true, true) => "·Y",
        };
        format!("{word}{pauli}")
    }
}

fn group_table() -> &'static Vec<SingleClifford> {
    static TABLE: OnceLock<Vec<SingleClifford>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = vec![SingleClifford::IDENTITY];
        let gens = [SingleClifford::hadamard(), SingleClifford::phase_gate()];
        let mut frontier = table.clone();
        while let Some(c) = frontier.pop() {
            for g in gens {
                let next = c.then(g);
                if !table.contains(&next) {
                    table.push(next);
                    frontier.push(next);
                }
            }
        }
        debug_assert_eq!(table.len(), 24);
        table
    })
}

/// One single-qubit Clifford per qubit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalCliffordLayer {
    sites: Vec<SingleClifford>,
}

impl LocalCliffordLayer {
    #[must_use]
    pub fn identity(n: usize) -> Self {
        Self { sites: vec![SingleClifford::IDENTITY; n] }
    }

    pub fn from_sites(sites: Vec<SingleClifford>) -> Self {
        assert!(sites.iter().all(|c| c.is_valid()), "invalid single-qubit block");
        Self { sites }
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn site(&self, j: usize) -> SingleClifford {
        self.sites[j]
    }

    pub fn set_site(&mut self, j: usize, c: SingleClifford) {
        self.sites[j] = c;
    }

    /// Apply this site first, then `c`.
    pub fn post_compose_site(&mut self, j: usize, c: SingleClifford) {
        self.sites[j] = self.sites[j].then(c);
    }

    #[must_use]
    pub fn inverse(&self) -> Self {
        Self { sites: self.sites.iter().map(|c| c.inverse()).collect() }
    }

    /// Conjugate every generator of a tableau through the layer.
    pub fn apply(&self, t: &StabilizerTableau) -> Result<StabilizerTableau, StabError> {
        assert_eq!(self.len(), t.n(), "layer width mismatch");
        let n = t.n();
        let gens = t
            .gens()
            .iter()
            .map(|g| {
                let mut out = PauliGen::identity(n);
                out.phase = g.phase;
                for j in 0..n {
                    let site = SitePauli::new(0, g.x.get(j), g.z.get(j));
                    if site == SitePauli::IDENTITY {
                        continue;
                    }
                    let img = self.sites[j].apply_site(site);
                    out.x.set(j, img.x);
                    out.z.set(j, img.z);
                    out.phase = (out.phase + img.ph) % 4;
                }
                out
            })
            .collect();
        StabilizerTableau::new(n, gens)
    }

    /// True when every site is the identity map up to a Pauli correction
    /// (the symplectic part is trivial).
    pub fn is_pauli_only(&self) -> bool {
        self.sites
            .iter()
            .all(|c| c.symplectic() == (true, false, false, true))
    }

    pub fn site_names(&self) -> Vec<String> {
        self.sites.iter().map(|c| c.name()).collect()
    }
}

impl fmt::Display for LocalCliffordLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.sites.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}:{}", j + 1, c.name())?;
        }
        Ok(())
    }
}
