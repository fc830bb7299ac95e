//! 稀疏表 RMQ 的 Rust 实现，供 rmq.py 调用
//! 下标在 Python 接口上从 1 开始

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

#[pyclass]
struct SparseTable {
    values: Vec<i64>,
    // table[k][p] 为区间 [p, p + 2^k) 的最小值下标（0 起）
    table: Vec<Vec<u32>>,
}

#[inline]
fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}

#[pymethods]
impl SparseTable {
    #[new]
    fn new(values: Vec<i64>) -> PyResult<Self> {
        let n = values.len();
        if n == 0 {
            return Err(PyValueError::new_err("RMQ 数组不能为空"));
        }
        let mut table: Vec<Vec<u32>> = vec![(0..n as u32).collect()];
        let mut k = 1;
        while (1usize << k) <= n {
            let half = 1usize << (k - 1);
            let width = n - (1usize << k) + 1;
            let prev = &table[k - 1];
            let mut level = Vec::with_capacity(width);
            for p in 0..width {
                let l = prev[p];
                let r = prev[p + half];
                // 相等取左侧，保证最小下标
                level.push(if values[l as usize] <= values[r as usize] { l } else { r });
            }
            table.push(level);
            k += 1;
        }
        Ok(SparseTable { values, table })
    }

    fn query_argmin(&self, lo: usize, hi: usize) -> PyResult<usize> {
        if lo < 1 || lo > hi || hi > self.values.len() {
            return Err(PyValueError::new_err(format!(
                "非法的查询区间 [{}, {}]，数组长度 {}",
                lo,
                hi,
                self.values.len()
            )));
        }
        let k = floor_log2(hi - lo + 1);
        let l = self.table[k][lo - 1] as usize;
        let r = self.table[k][hi - (1usize << k)] as usize;
        Ok(if self.values[l] <= self.values[r] { l + 1 } else { r + 1 })
    }

    fn __len__(&self) -> usize {
        self.values.len()
    }
}

#[pymodule]
fn wsnm_core(_py: Python, m: &PyModule) -> PyResult<()> {
    m.add_class::<SparseTable>()?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
