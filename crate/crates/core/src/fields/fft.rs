use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

type Plan = Arc<dyn Fft<f64>>;

fn plan(n: usize, direction: FftDirection) -> Plan {
    static CACHE: OnceLock<Mutex<HashMap<(usize, bool), Plan>>> = OnceLock::new();
    let forward = direction == FftDirection::Forward;
    let mut cache = CACHE.get_or_init(Default::default).lock().unwrap();
    cache
        .entry((n, forward))
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// Unnormalized in-place 3D DFT of every `n³` block in `data`.
///
/// Index layout is `(i * n + j) * n + k` with `k` fastest. The result is
/// bitwise independent of the thread count because every line is
/// transformed independently.
pub(crate) fn dft3(n: usize, data: &mut [Complex64], direction: FftDirection) {
    let plan = plan(n, direction);
    let n2 = n * n;
    let n3 = n2 * n;
    assert_eq!(data.len() % n3, 0);
    for block in data.chunks_mut(n3) {
        // k axis: contiguous lines.
        block.par_chunks_mut(n2).for_each_init(
            || vec![Complex64::default(); plan.get_inplace_scratch_len()],
            |scratch, slab| plan.process_with_scratch(slab, scratch),
        );
        // j axis: transpose each i-slab, transform, transpose back.
        block.par_chunks_mut(n2).for_each_init(
            || {
                (
                    vec![Complex64::default(); n2],
                    vec![Complex64::default(); plan.get_inplace_scratch_len()],
                )
            },
            |(buf, scratch), slab| {
                transpose(slab, buf, n);
                plan.process_with_scratch(buf, scratch);
                transpose(buf, slab, n);
            },
        );
        // i axis: gather (i, k) planes for each j.
        let lines: Vec<Vec<Complex64>> = (0..n)
            .into_par_iter()
            .map_init(
                || vec![Complex64::default(); plan.get_inplace_scratch_len()],
                |scratch, j| {
                    let mut buf = vec![Complex64::default(); n2];
                    for i in 0..n {
                        for k in 0..n {
                            buf[k * n + i] = block[(i * n + j) * n + k];
                        }
                    }
                    plan.process_with_scratch(&mut buf, scratch);
                    buf
                },
            )
            .collect();
        for (j, buf) in lines.iter().enumerate() {
            for i in 0..n {
                for k in 0..n {
                    block[(i * n + j) * n + k] = buf[k * n + i];
                }
            }
        }
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for a in 0..n {
        for b in 0..n {
            dst[b * n + a] = src[a * n + b];
        }
    }
}
