/// Calls `f` on every permutation of `0..n` (Heap's algorithm).
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Calls `f` on every injection `0..k -> 0..m` as the image list.
pub fn for_each_injection(k: usize, m: usize, mut f: impl FnMut(&[usize])) {
    fn rec(
        k: usize,
        m: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for j in 0..m {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(k, m, used, cur, f);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if k > m {
        return;
    }
    rec(
        k,
        m,
        &mut vec![false; m],
        &mut Vec::with_capacity(k),
        &mut f,
    );
}

/// Calls `f` on every map `0..k -> 0..n`.
pub fn for_each_assignment(k: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        if k == 0 {
            f(&[]);
        }
        return;
    }
    let mut a = vec![0usize; k];
    loop {
        f(&a);
        let mut i = 0;
        while i < k {
            a[i] += 1;
            if a[i] < n {
                break;
            }
            a[i] = 0;
            i += 1;
        }
        if i == k {
            return;
        }
    }
}
