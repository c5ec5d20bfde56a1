//! Named families of fat points in the plane. Lines are drawn as the
//! coordinate axes `x = 0` and `y = 0` of the affine chart `z = 1`; the seed
//! only chooses where along the axes the points sit.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::FatPointsP2;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneFamily {
    /// `2(p_1 + ... + p_r) + (p_{r+1} + ... + p_{r+s})`, all on one line.
    Collinear { doubles: usize, simples: usize },
    /// `p_1 + ... + p_{r+s} + 2 p_0`: `r` points on one line, `s` on another,
    /// `p_0` their intersection.
    TwoLinesThroughDouble { r: usize, s: usize },
    /// `2 p_1 + p_2 + p_3 + p_4` with the simple points collinear and `p_1` off that line.
    DoubleOffTriple,
    /// `2 p_1 + p_2 + ... + p_n`, the simple points collinear, `p_1` off their line.
    DoubleOffLine { n: usize },
    /// `2 p_1 + p_2 + p_3 + p_4`: `p_1, p_2` on one line, `p_3, p_4` on another,
    /// no three collinear.
    DoubleWithTwoPairs,
    /// `2 p_1 + 2 p_2 + p_3`, not collinear.
    TwoDoublesAndSimple,
    /// `DoubleWithTwoPairs` plus a simple point at the intersection of the two lines.
    DoubleWithTwoPairsAndNode,
    /// Collinear points with the given multiplicities (each 1 or 2).
    CollinearMixed { multiplicities: Vec<u32> },
}

impl PlaneFamily {
    /// Parses a CLI case id: `a`, `b`, `c`, `z`, `w-prime`, `z-prime`,
    /// `w-double-prime`, `v-prime`.
    pub fn from_case(case: &str, r: usize, s: usize, n: usize, multiplicities: &[u32]) -> Result<Self> {
        Ok(match case {
            "a" => PlaneFamily::Collinear { doubles: r, simples: s },
            "b" => PlaneFamily::TwoLinesThroughDouble { r, s },
            "c" => PlaneFamily::DoubleOffTriple,
            "z" => PlaneFamily::DoubleOffLine { n },
            "w-prime" => PlaneFamily::DoubleWithTwoPairs,
            "z-prime" => PlaneFamily::TwoDoublesAndSimple,
            "w-double-prime" => PlaneFamily::DoubleWithTwoPairsAndNode,
            "v-prime" => PlaneFamily::CollinearMixed { multiplicities: multiplicities.to_vec() },
            other => return Err(Error::InvalidParameters(format!("unknown case {other:?}"))),
        })
    }
}

/// `count` distinct nonzero positions along an axis.
fn positions(rng: &mut ChaCha8Rng, count: usize) -> Vec<i64> {
    let mut pool: Vec<i64> = (1..=60).collect();
    pool.shuffle(rng);
    pool.truncate(count);
    pool
}

pub fn build_plane_family(family: &PlaneFamily, seed: u64) -> Result<FatPointsP2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let on_x_axis = |x: i64| [x, 0, 1];
    let on_y_axis = |y: i64| [0, y, 1];
    let (points, mults): (Vec<[i64; 3]>, Vec<u32>) = match family {
        PlaneFamily::Collinear { doubles, simples } => {
            if *doubles < 1 {
                return Err(Error::InvalidParameters("need at least one double point".into()));
            }
            let xs = positions(&mut rng, doubles + simples);
            let mults = (0..doubles + simples).map(|i| if i < *doubles { 2 } else { 1 }).collect();
            (xs.into_iter().map(on_x_axis).collect(), mults)
        }
        PlaneFamily::TwoLinesThroughDouble { r, s } => {
            if *r < 1 || *s < 1 {
                return Err(Error::InvalidParameters("need r, s >= 1".into()));
            }
            let mut pts = vec![[0, 0, 1]];
            pts.extend(positions(&mut rng, *r).into_iter().map(on_y_axis));
            pts.extend(positions(&mut rng, *s).into_iter().map(on_x_axis));
            let mut mults = vec![2];
            mults.extend(std::iter::repeat(1).take(r + s));
            (pts, mults)
        }
        PlaneFamily::DoubleOffTriple => return build_plane_family(&PlaneFamily::DoubleOffLine { n: 4 }, seed),
        PlaneFamily::DoubleOffLine { n } => {
            if *n < 2 {
                return Err(Error::InvalidParameters("need n >= 2".into()));
            }
            let mut pts = vec![on_y_axis(positions(&mut rng, 1)[0])];
            pts.extend(positions(&mut rng, n - 1).into_iter().map(on_x_axis));
            let mut mults = vec![2];
            mults.extend(std::iter::repeat(1).take(n - 1));
            (pts, mults)
        }
        PlaneFamily::DoubleWithTwoPairs | PlaneFamily::DoubleWithTwoPairsAndNode => {
            let ys = positions(&mut rng, 2);
            let xs = positions(&mut rng, 2);
            let mut pts = vec![on_y_axis(ys[0]), on_y_axis(ys[1]), on_x_axis(xs[0]), on_x_axis(xs[1])];
            let mut mults = vec![2, 1, 1, 1];
            if matches!(family, PlaneFamily::DoubleWithTwoPairsAndNode) {
                pts.push([0, 0, 1]);
                mults.push(1);
            }
            (pts, mults)
        }
        PlaneFamily::TwoDoublesAndSimple => {
            let xs = positions(&mut rng, 2);
            let y = positions(&mut rng, 1)[0];
            (vec![on_y_axis(y), on_x_axis(xs[0]), on_x_axis(xs[1])], vec![2, 2, 1])
        }
        PlaneFamily::CollinearMixed { multiplicities } => {
            if multiplicities.is_empty() || multiplicities.iter().any(|m| !(1..=2).contains(m)) {
                return Err(Error::InvalidParameters("multiplicities must be 1 or 2".into()));
            }
            let xs = positions(&mut rng, multiplicities.len());
            (xs.into_iter().map(on_x_axis).collect(), multiplicities.clone())
        }
    };
    FatPointsP2::from_ints(&points, &mults)
}
