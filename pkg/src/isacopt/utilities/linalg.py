import torch


class NotPositiveDefiniteError(ValueError):
    r"""Raised when a matrix that must be positive definite is not.

    A failed Cholesky factorization of a Fisher information matrix indicates
    an upstream modelling or numerical bug, so it is reported explicitly
    instead of being turned into ``nan``.

    Parameters
    ----------
    what : str
        Name of the offending quantity.
    info : torch.Tensor, optional
        The ``info`` tensor returned by ``torch.linalg.cholesky_ex``.

    """

    def __init__(self, what, info=None):

        self.what = what
        self.info = info

        message = f"{what} is not positive definite"
        if info is not None:
            bad = torch.nonzero(torch.atleast_1d(info)).flatten().tolist()
            message += f" (failed batch entries: {bad})"

        super(NotPositiveDefiniteError, self).__init__(message)


def cholesky(A, what="matrix"):
    r"""Batched Cholesky factorization with an explicit failure mode.

    Parameters
    ----------
    A : torch.Tensor
        Hermitian (or real symmetric) matrices with shape ``(..., n, n)``.
    what : str, optional
        Name used in the error message.

    Returns
    -------
    Lower triangular factors with the same shape as ``A``.

    Raises
    ------
    NotPositiveDefiniteError
        If any matrix in the batch is not positive definite.

    """

    L, info = torch.linalg.cholesky_ex(A)
    if torch.any(info != 0):
        raise NotPositiveDefiniteError(what, info)

    return L


def logdet_pd(A, what="matrix"):
    r"""Log-determinant of positive definite matrices via Cholesky.

    Parameters
    ----------
    A : torch.Tensor
        Hermitian positive definite matrices with shape ``(..., n, n)``.
    what : str, optional
        Name used in the error message.

    Returns
    -------
    Real tensor of shape ``(...)``.

    """

    L = cholesky(A, what)
    return 2.0 * torch.log(torch.diagonal(L, dim1=-2, dim2=-1).real).sum(-1)


def inverse_pd(A, what="matrix"):
    r"""Inverse of positive definite matrices via Cholesky."""

    L = cholesky(A, what)
    return torch.cholesky_inverse(L)


def hermitian_part(A):

    return 0.5 * (A + A.transpose(-2, -1).conj())


def real_block(A):
    r"""Real :math:`2n \times 2n` representation of a complex matrix.

    Returns :math:`\begin{bmatrix} \Re A & -\Im A \\ \Im A & \Re A \end{bmatrix}`,
    batched over leading dimensions.

    """

    top = torch.cat([A.real, -A.imag], dim=-1)
    bottom = torch.cat([A.imag, A.real], dim=-1)
    return torch.cat([top, bottom], dim=-2)


def khatri_rao(A, B):
    r"""Column-wise Kronecker (Khatri-Rao) product.

    Parameters
    ----------
    A : torch.Tensor
        Matrix with shape ``(..., p, k)``.
    B : torch.Tensor
        Matrix with shape ``(..., q, k)``.

    Returns
    -------
    Matrix with shape ``(..., p*q, k)`` whose ``i``-th column is
    ``kron(A[:, i], B[:, i])``.

    """

    if A.shape[-1] != B.shape[-1]:
        raise ValueError(f"Khatri-Rao factors need matching column counts, got {A.shape[-1]} and {B.shape[-1]}.")

    p, k = A.shape[-2:]
    q = B.shape[-2]
    out = A.unsqueeze(-2) * B.unsqueeze(-3)
    return out.reshape(*out.shape[:-3], p*q, k)


def inner(U, V):
    r"""Real Frobenius inner product :math:`\Re\,\mathrm{tr}(U^H V)`."""

    return torch.sum(U.conj() * V).real.item()


def min_eigenvalue(A):
    r"""Smallest eigenvalue of a Hermitian matrix."""

    return torch.linalg.eigvalsh(hermitian_part(A))[..., 0]
