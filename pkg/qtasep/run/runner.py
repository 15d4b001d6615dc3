import logging
import os
import threading
from datetime import datetime, timedelta
from time import perf_counter, sleep
from typing import Any, Callable, List, Sequence

import numpy as np
from tqdm import tqdm

logger = logging.getLogger(__name__)


def _list_split(items, chunks):
	"""Split the indices of a list into chunks"""
	return [[int(i) for i in x] for x in np.array_split(np.arange(len(items)), chunks)]


class SampleWorker:
	"""Runs a list of jobs one after the other in a single thread."""

	def __init__(self, task: Callable[[Any], Any], jobs: Sequence, job_ids: List[int], results: dict, name: str = ''):
		"""
		:param task: called on each job, must be thread-safe
		:param jobs: all jobs of the session
		:param job_ids: indices into ``jobs`` owned by this worker
		:param results: shared dict, job index -> result
		"""
		self.task = task
		self.jobs = jobs
		self.job_ids = job_ids
		self.results = results

		self.num_done = 0
		self.error = None
		self.name = name
		self.status = f'STARTED THREAD {self.name}'
		self.thread = threading.Thread(target=self._run, name=f'qtasep-worker-{name}', daemon=True)

	def _run(self):
		self.status = f"THREAD {self.name} RUNNING..."
		try:
			for i in self.job_ids:
				self.results[i] = self.task(self.jobs[i])
				self.num_done += 1
				logger.debug(f"thread {self.name}: job {i} done")
		except Exception as e:
			self.error = e
			self.status = f'✖ THREAD {self.name} FAILED [{type(e).__name__}].'
			return
		self.status = f'✓ THREAD {self.name} COMPLETED.'

	def start(self):
		self.thread.start()

	@property
	def is_running(self):
		return self.thread.is_alive()

	def __len__(self):
		return len(self.job_ids)


class SampleRunner:
	"""Fans jobs out over worker threads and collects results in job order.

	Results depend only on the jobs, never on how they were split over threads."""

	def __init__(self, task: Callable[[Any], Any], jobs: Sequence, threads: int = 1, output_directory: str = None):
		"""
		:param task: function applied to every job
		:param jobs: list of jobs
		:param threads: number of worker threads
		:param output_directory: if given, a progress report ``report_XX.txt`` is written there
		"""
		self.jobs = list(jobs)
		self.num_threads = max(1, min(threads, len(self.jobs)))
		self.results = {}

		self.workers = [SampleWorker(task, self.jobs, ids, self.results, name=str(i))
						for i, ids in enumerate(_list_split(self.jobs, self.num_threads))]

		self.report_loc = None
		if output_directory is not None:
			os.makedirs(output_directory, exist_ok=True)
			# Set report name as report_xx, incrementing by 1 each report
			report_fname = f"report_{len([f for f in os.listdir(output_directory) if f.startswith('report_')]):02d}.txt"
			self.report_loc = os.path.join(output_directory, report_fname)

		self.t0 = 0
		self.session_start = None

	def __len__(self):
		return len(self.jobs)

	@property
	def num_done(self):
		return sum(w.num_done for w in self.workers)

	def run(self, progress_bars: bool = True, tick: float = 0.2, report_every: float = 15.0) -> List[Any]:
		"""Start all workers and wait for them.

		:param progress_bars: Show progress bars for each thread and overall progress
		:param tick: How often to update progress bars
		:param report_every: How often to rewrite the progress report
		:return: results, in job order"""
		self.t0 = perf_counter()
		self.session_start = datetime.now()
		logger.info(f"Running {len(self)} jobs on {self.num_threads} threads")

		for worker in self.workers:
			worker.start()

		last_report_time = perf_counter()
		bar_format = '{l_bar}{bar:10}{r_bar}{bar:-10b}'
		pbars = []
		pbar = tqdm(total=len(self), bar_format=bar_format, position=0, disable=not progress_bars)
		if progress_bars and self.num_threads > 1:
			pbars = [tqdm(total=len(w), bar_format=bar_format, position=i + 1) for i, w in enumerate(self.workers)]

		try:
			while any(w.is_running for w in self.workers):
				sleep(tick)

				pbar.set_description(f'Sampling... [{self.num_done}/{len(self)}]')
				pbar.n = self.num_done
				pbar.refresh()

				for p, worker in zip(pbars, self.workers):
					p.n = worker.num_done
					p.set_description(worker.status)
					p.refresh()

				if (perf_counter() - last_report_time) >= report_every:
					self.update_report()
					last_report_time = perf_counter()

			pbar.n = self.num_done
			pbar.refresh()
		finally:
			for p in pbars + [pbar]:
				p.close()

		for worker in self.workers:
			worker.thread.join()
		self.update_report()

		for worker in self.workers:
			if worker.error is not None:
				logger.error(f"worker {worker.name} failed: {worker.error}")
				raise worker.error

		elapsed = perf_counter() - self.t0
		logger.info(f"{len(self)} jobs finished in {timedelta(seconds=round(elapsed))}")
		return [self.results[i] for i in range(len(self))]

	def update_report(self):
		if self.report_loc is None:
			return

		elapsed = perf_counter() - self.t0

		report = []
		if self.num_done > 0:
			# calculate number of seconds remaining
			s_remaining = (len(self) - self.num_done) * (elapsed / self.num_done)
			eta = datetime.now() + timedelta(seconds=s_remaining)

			report += [
				f"Number of samples drawn: {self.num_done}\n",
				f"Total session quota: {len(self)}\n",
				f"Time elapsed: {timedelta(seconds=round(elapsed))}\n",
				f"Time per sample (s): {elapsed / self.num_done:.4f}\n\n",

				f"Session start: {self.session_start.strftime('%I:%M %p %d/%m/%y')}\n"
				f"Estimated End: {eta.strftime('%I:%M %p %d/%m/%y')}"
			]

		with open(self.report_loc, 'w') as outfile:
			outfile.writelines(report)
