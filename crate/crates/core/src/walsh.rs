//! Fast Walsh–Hadamard transform over the Boolean cube `GF(2)^n`.

/// In-place unnormalized transform: afterwards
/// `data[m] = sum_p data_in[p] * (-1)^popcount(m & p)`.
///
/// `data.len()` must be a power of two.
pub fn fwht(data: &mut [i64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "length {n} is not a power of two");
    let mut h = 1;
    while h < n {
        for block in data.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (x, y) in lo.iter_mut().zip(hi.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a + b;
                *y = a - b;
            }
        }
        h <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(data: &[i64]) -> Vec<i64> {
        (0..data.len())
            .map(|m| {
                data.iter()
                    .enumerate()
                    .map(|(p, &v)| if (m & p).count_ones() % 2 == 0 { v } else { -v })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn delta_transforms_to_constant() {
        let mut d = vec![0i64; 8];
        d[0] = 1;
        fwht(&mut d);
        assert_eq!(d, vec![1; 8]);
    }

    proptest! {
        #[test]
        fn matches_naive(v in proptest::collection::vec(-5i64..5, 16)) {
            let mut d = v.clone();
            fwht(&mut d);
            prop_assert_eq!(d.clone(), naive(&v));
            // applying twice scales by n
            fwht(&mut d);
            let scaled: Vec<i64> = v.iter().map(|x| x * 16).collect();
            prop_assert_eq!(d, scaled);
        }
    }
}
