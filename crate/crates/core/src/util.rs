use itertools::Itertools;

/// Every digit vector `d` with `d[k] < radices[k]`, last position fastest.
/// No radices gives a single empty vector.
pub(crate) fn product(radices: Vec<usize>) -> impl Iterator<Item = Vec<usize>> {
    radices.into_iter().map(|r| 0..r).multi_cartesian_product()
}

/// [`product`] without an allocation per step.
pub(crate) struct Odometer {
    radices: Vec<usize>,
    digits: Vec<usize>,
    state: Step,
}

enum Step {
    First,
    Running,
    Done,
}

impl Odometer {
    pub(crate) fn new(radices: Vec<usize>) -> Self {
        let digits = vec![0; radices.len()];
        Odometer { radices, digits, state: Step::First }
    }

    pub(crate) fn next(&mut self) -> Option<&[usize]> {
        match self.state {
            Step::Done => return None,
            Step::First if self.radices.contains(&0) => {
                self.state = Step::Done;
                return None;
            }
            Step::First => {
                self.state = Step::Running;
                return Some(&self.digits);
            }
            Step::Running => {}
        }
        for k in (0..self.digits.len()).rev() {
            self.digits[k] += 1;
            if self.digits[k] < self.radices[k] {
                return Some(&self.digits);
            }
            self.digits[k] = 0;
        }
        self.state = Step::Done;
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(product(vec![]).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(product(vec![2, 3]).count(), 6);
        assert_eq!(product(vec![2, 0]).count(), 0);
        assert_eq!(product(vec![2, 2]).nth(1), Some(vec![0, 1]));
    }

    #[test]
    fn odometer_matches_product() {
        for radices in [vec![], vec![3], vec![2, 3, 1], vec![2, 0], vec![0]] {
            let mut odometer = Odometer::new(radices.clone());
            let mut seen = Vec::new();
            while let Some(d) = odometer.next() {
                seen.push(d.to_vec());
            }
            assert_eq!(seen, product(radices).collect::<Vec<_>>());
            assert!(odometer.next().is_none());
        }
    }
}
