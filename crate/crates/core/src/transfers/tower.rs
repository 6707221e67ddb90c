use crate::error::{Error, Result};
use crate::ext::ExtensionDesc;
use crate::field::{Fe, FiniteField};
use crate::kmw::KmwFq;
use crate::poly::Poly;

use super::{TransferMode, Transferer};

/// A chain `E = E_0 < E_1 < ... < E_r = F` of monogenic steps.
#[derive(Clone, Debug)]
pub struct Tower {
    base: FiniteField,
    steps: Vec<ExtensionDesc>,
}

impl Tower {
    pub fn new(base: &FiniteField, steps: Vec<ExtensionDesc>) -> Result<Self> {
        let mut cur = base.clone();
        for s in &steps {
            if *s.base() != cur {
                return Err(Error::FieldMismatch(format!("step over {} follows {}", s.base(), cur)));
            }
            cur = s.top().clone();
        }
        Ok(Tower { base: base.clone(), steps })
    }

    /// Successive minimal polynomials, each over the field produced by the previous step.
    pub fn from_min_polys(base: &FiniteField, polys: &[Poly]) -> Result<Self> {
        let mut cur = base.clone();
        let mut steps = Vec::new();
        for f in polys {
            let s = ExtensionDesc::from_min_poly(&cur, f)?;
            cur = s.top().clone();
            steps.push(s);
        }
        Tower::new(base, steps)
    }

    /// Successive generators, each given inside the canonical field it generates.
    pub fn from_generators(base: &FiniteField, gens: &[(FiniteField, Fe)]) -> Result<Self> {
        let mut cur = base.clone();
        let mut steps = Vec::new();
        for (field, g) in gens {
            let s = ExtensionDesc::from_generator(&cur, field, *g)?;
            cur = field.clone();
            steps.push(s);
        }
        Tower::new(base, steps)
    }

    pub fn base(&self) -> &FiniteField {
        &self.base
    }
    pub fn top(&self) -> &FiniteField {
        self.steps.last().map_or(&self.base, |s| s.top())
    }
    pub fn steps(&self) -> &[ExtensionDesc] {
        &self.steps
    }
    pub fn degree(&self) -> usize {
        self.steps.iter().map(|s| s.degree()).product()
    }

    /// Image in the top field of an element of the top of step `i`.
    fn lift_to_top(&self, i: usize, a: Fe) -> Fe {
        self.steps[i + 1..].iter().fold(a, |acc, s| s.embed(acc))
    }

    /// `prod f_i'(x_i)` inside the top field.
    pub fn derivative_unit(&self) -> Fe {
        let top = self.top();
        (0..self.steps.len()).fold(Fe::ONE, |acc, i| {
            top.mul(acc, self.lift_to_top(i, self.steps[i].derivative_at_generator()))
        })
    }

    pub fn describe(&self) -> String {
        let mut s = self.base.to_string();
        for st in &self.steps {
            s.push_str(&format!(" -> {} at {}", st.min_poly().format(st.base(), "t"), st.top().format(st.generator())));
        }
        s
    }
}

/// `Tr_{x_1} o ... o Tr_{x_r}` applied to `beta` over the top field.
pub fn transfer_tower(tower: &Tower, beta: &KmwFq, mode: TransferMode) -> Result<KmwFq> {
    Transferer::new().tower(tower, beta, mode)
}

impl Transferer {
    pub fn tower(&mut self, tower: &Tower, beta: &KmwFq, mode: TransferMode) -> Result<KmwFq> {
        if beta.field() != tower.top() {
            return Err(Error::FieldMismatch(format!("{} vs {}", beta.field(), tower.top())));
        }
        let mut cur = beta.clone();
        for s in tower.steps.iter().rev() {
            cur = self.transfer(s, &cur, mode)?;
        }
        Ok(cur)
    }
}

/// Square-class representative of `u_a / u_b`, `u` the product of the
/// derivative units; raw transfers along `a` and `b` then agree after
/// twisting by `<u>`.
pub fn transition_unit(a: &Tower, b: &Tower) -> Result<Fe> {
    if a.base() != b.base() || a.top() != b.top() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.describe(), b.describe())));
    }
    let top = a.top();
    Ok(top.class_rep(top.div(a.derivative_unit(), b.derivative_unit())))
}
