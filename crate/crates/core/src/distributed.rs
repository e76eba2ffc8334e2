//! Slab-decomposed 2D FFT over in-process logical ranks.
//!
//! Each rank is a scoped worker thread that owns a [`RankMailbox`]. Ranks
//! share no mutable state; row blocks move between them only as addressed
//! messages. The transform runs row FFTs on each slab, an all-to-all
//! transpose, column FFTs on the transposed slab, and a transpose back, so
//! the result comes out in the input's `(ny0, ny1)` layout.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::sync::Arc;
use std::time::Duration;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fft::{Direction, Plan1d};
use crate::grid::{local_slab, slabs};
use crate::scalar::Scalar;

const POLL: Duration = Duration::from_millis(20);

#[derive(Debug)]
pub struct Envelope<M> {
    pub source: usize,
    pub tag: u64,
    pub payload: M,
}

/// One rank's view of the communicator: senders to every rank's inbox plus
/// its own inbox. Messages from a given source arrive in send order; those
/// not yet asked for are parked until a matching `recv`.
pub struct RankMailbox<M> {
    rank: usize,
    outboxes: Vec<Sender<Envelope<M>>>,
    inbox: Receiver<Envelope<M>>,
    parked: VecDeque<Envelope<M>>,
    abort: Arc<AtomicBool>,
}

impl<M> RankMailbox<M> {
    /// Creates the mailboxes of a `ranks`-wide communicator, ordered by rank.
    pub fn world(ranks: usize) -> Result<Vec<RankMailbox<M>>> {
        if ranks == 0 {
            return Err(Error::Rank { rank: 0, ranks: 0 });
        }
        let (senders, receivers): (Vec<_>, Vec<_>) = (0..ranks).map(|_| mpsc::channel()).unzip();
        let abort = Arc::new(AtomicBool::new(false));
        Ok(receivers
            .into_iter()
            .enumerate()
            .map(|(rank, inbox)| RankMailbox {
                rank,
                outboxes: senders.clone(),
                inbox,
                parked: VecDeque::new(),
                abort: Arc::clone(&abort),
            })
            .collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn size(&self) -> usize {
        self.outboxes.len()
    }

    pub fn send(&self, dest: usize, tag: u64, payload: M) -> Result<()> {
        let outbox = self.outboxes.get(dest).ok_or(Error::Rank {
            rank: dest,
            ranks: self.size(),
        })?;
        outbox
            .send(Envelope {
                source: self.rank,
                tag,
                payload,
            })
            .map_err(|_| Error::Usage(format!("rank {dest} is no longer receiving")))
    }

    /// Blocks until the next message from `source` carrying `tag` arrives.
    pub fn recv(&mut self, source: usize, tag: u64) -> Result<M> {
        if source >= self.size() {
            return Err(Error::Rank {
                rank: source,
                ranks: self.size(),
            });
        }
        if let Some(pos) = self
            .parked
            .iter()
            .position(|e| e.source == source && e.tag == tag)
        {
            return Ok(self.parked.remove(pos).expect("position is valid").payload);
        }
        loop {
            match self.inbox.recv_timeout(POLL) {
                Ok(env) if env.source == source && env.tag == tag => return Ok(env.payload),
                Ok(env) => self.parked.push_back(env),
                Err(RecvTimeoutError::Timeout) => {
                    if self.abort.load(Ordering::Acquire) {
                        return Err(Error::Aborted(self.rank));
                    }
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(Error::Usage("communicator torn down".into()))
                }
            }
        }
    }

    fn signal_abort(&self) {
        self.abort.store(true, Ordering::Release);
    }
}

/// Runs `body` once per rank on its own scoped thread and returns the
/// per-rank results in rank order. All workers are joined before returning.
pub fn run_ranks<M, R, F>(ranks: usize, body: F) -> Result<Vec<R>>
where
    M: Send,
    R: Send,
    F: Fn(&mut RankMailbox<M>) -> Result<R> + Sync,
{
    let world = RankMailbox::<M>::world(ranks)?;
    let body = &body;
    std::thread::scope(|scope| {
        let handles: Vec<_> = world
            .into_iter()
            .map(|mut mailbox| {
                scope.spawn(move || {
                    let out = body(&mut mailbox);
                    if out.is_err() {
                        mailbox.signal_abort();
                    }
                    out
                })
            })
            .collect();
        let mut results = Vec::with_capacity(handles.len());
        let mut errors = Vec::new();
        for handle in handles {
            match handle.join() {
                Ok(Ok(v)) => results.push(v),
                Ok(Err(e)) => errors.push(e),
                Err(_) => errors.push(Error::Usage("rank worker panicked".into())),
            }
        }
        // the root cause, not the peers that gave up waiting on it
        match errors.iter().position(|e| !matches!(e, Error::Aborted(_))) {
            Some(pos) => Err(errors.swap_remove(pos)),
            None => match errors.pop() {
                Some(e) => Err(e),
                None => Ok(results),
            },
        }
    })
}

/// This rank's part of the global transpose of a `rows x cols` grid.
///
/// `local` holds this rank's row slab (`local_slab(rows, W, rank)` rows of
/// `cols` values). The result holds its slab of the `cols x rows` transposed
/// grid. Zero-row slabs exchange empty blocks.
pub fn transpose_slab<E: Copy + Default + Send>(
    mailbox: &mut RankMailbox<Vec<E>>,
    local: &[E],
    rows: usize,
    cols: usize,
    tag: u64,
) -> Result<Vec<E>> {
    if rows == 0 || cols == 0 {
        return Err(Error::dimension("cannot transpose an empty grid"));
    }
    let ranks = mailbox.size();
    let me = mailbox.rank();
    let mine = local_slab(rows, ranks, me)?;
    if local.len() != mine.local_n0 * cols {
        return Err(Error::dimension(format!(
            "rank {me} holds {} values, slab needs {}",
            local.len(),
            mine.local_n0 * cols
        )));
    }
    for dest in 0..ranks {
        let theirs = local_slab(cols, ranks, dest)?;
        let mut block = Vec::with_capacity(mine.local_n0 * theirs.local_n0);
        for row in local.chunks_exact(cols) {
            block.extend_from_slice(&row[theirs.rows()]);
        }
        mailbox.send(dest, tag, block)?;
    }

    let my_cols = local_slab(cols, ranks, me)?;
    let mut out = vec![E::default(); my_cols.local_n0 * rows];
    for source in 0..ranks {
        let theirs = local_slab(rows, ranks, source)?;
        let block = mailbox.recv(source, tag)?;
        if block.len() != theirs.local_n0 * my_cols.local_n0 {
            return Err(Error::dimension(format!(
                "rank {me} got a block of {} values from rank {source}",
                block.len()
            )));
        }
        if my_cols.local_n0 == 0 {
            continue;
        }
        for (i, chunk) in block.chunks_exact(my_cols.local_n0).enumerate() {
            let global_row = theirs.local_0_start + i;
            for (c, &v) in chunk.iter().enumerate() {
                out[c * rows + global_row] = v;
            }
        }
    }
    Ok(out)
}

/// Global transpose of a slab-distributed `rows x cols` grid across `ranks`
/// workers. `slabs_in[r]` is rank `r`'s row slab.
pub fn global_transpose<E: Copy + Default + Send + Sync>(
    slabs_in: &[Vec<E>],
    rows: usize,
    cols: usize,
) -> Result<Vec<Vec<E>>> {
    run_ranks(slabs_in.len(), |mailbox: &mut RankMailbox<Vec<E>>| {
        transpose_slab(mailbox, &slabs_in[mailbox.rank()], rows, cols, 0)
    })
}

/// Splits a row-major grid into per-rank row slabs.
pub fn scatter<E: Clone>(
    data: &[E],
    rows: usize,
    cols: usize,
    ranks: usize,
) -> Result<Vec<Vec<E>>> {
    if data.len() != rows * cols {
        return Err(Error::dimension("buffer does not match grid dimensions"));
    }
    Ok(slabs(rows, ranks)?
        .into_iter()
        .map(|s| data[s.local_0_start * cols..(s.local_0_start + s.local_n0) * cols].to_vec())
        .collect())
}

/// Unnormalized 2D DFT of a row-major `ny0 x ny1` buffer computed by
/// `ranks` workers exchanging row blocks.
pub fn distributed_fft_2d<T: Scalar>(
    data: &[Complex<T>],
    ny0: usize,
    ny1: usize,
    direction: Direction,
    ranks: usize,
) -> Result<Vec<Complex<T>>> {
    if ny0 == 0 || ny1 == 0 {
        return Err(Error::dimension(format!(
            "grid dimensions must be positive, got {ny0}x{ny1}"
        )));
    }
    if data.len() != ny0 * ny1 {
        return Err(Error::dimension(format!(
            "buffer of {} elements does not match {ny0}x{ny1}",
            data.len()
        )));
    }
    let row_plan = Plan1d::<T>::new(ny1, direction)?;
    let col_plan = Plan1d::<T>::new(ny0, direction)?;
    let parts = scatter(data, ny0, ny1, ranks)?;

    let gathered = run_ranks(ranks, |mailbox: &mut RankMailbox<Vec<Complex<T>>>| {
        let mut local = parts[mailbox.rank()].clone();
        let mut scratch = vec![
            Complex::new(T::zero(), T::zero());
            row_plan.scratch_len().max(col_plan.scratch_len())
        ];
        row_plan.process_with_scratch(&mut local, &mut scratch)?;
        let mut transposed = transpose_slab(mailbox, &local, ny0, ny1, 0)?;
        col_plan.process_with_scratch(&mut transposed, &mut scratch)?;
        transpose_slab(mailbox, &transposed, ny1, ny0, 1)
    })?;

    Ok(gathered.into_iter().flatten().collect())
}
