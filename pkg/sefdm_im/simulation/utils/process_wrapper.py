# SPDX-License-Identifier: BSD-3-Clause
# For full license text, see the LICENSE file in the repo root
# or https://opensource.org/licenses/BSD-3-Clause

import logging
import multiprocessing as mp

_SPAWN = mp.get_context("spawn")


class ProcessWrapper(_SPAWN.Process):
    """
    A process wrapper to catch exceptions when they occur and to hand the
    target's return value back to the parent.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._parent_conn, self._child_conn = _SPAWN.Pipe()
        self._exception = None
        self._result = None
        self._received = False

    def run(self):
        try:
            result = self._target(*self._args, **self._kwargs)
            self._child_conn.send((None, result))
        except Exception as err:
            logging.error(err)
            self._child_conn.send((err, None))

    def _receive(self, block=False):
        if self._received:
            return
        if block or self._parent_conn.poll():
            self._exception, self._result = self._parent_conn.recv()
            self._received = True

    @property
    def exception(self):
        self._receive()
        return self._exception

    def collect(self):
        """
        Blocks until the worker has reported, joins it and returns its
        result. Re-raises the worker's exception in the parent.
        """
        self._receive(block=True)
        self.join()
        if self._exception is not None:
            raise self._exception
        return self._result


def run_in_workers(target, kwargs_list):
    """
    Runs target(**kwargs) for every entry in its own spawned process and
    returns the results in the order of kwargs_list.
    """
    workers = [ProcessWrapper(target=target, kwargs=kwargs) for kwargs in kwargs_list]
    for worker_id, worker in enumerate(workers):
        logging.info(f"Starting worker process: {worker_id} ")
        worker.start()
    return [worker.collect() for worker in workers]
