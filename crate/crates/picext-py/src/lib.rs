use pyo3::prelude::*;

#[pymodule]
fn picext(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
