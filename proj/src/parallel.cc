#include "smartem/parallel.h"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace smartem
{

std::size_t
WorkerCount()
{
    if (const char* env = std::getenv("SMARTEM_THREADS"))
    {
        try
        {
            const unsigned long requested = std::stoul(env);
            if (requested > 0)
            {
                return requested;
            }
        }
        catch (const std::exception&)
        {
            // Unparsable values fall back to auto.
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void
ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body, std::size_t workers)
{
    if (workers == 0)
    {
        workers = WorkerCount();
    }
    workers = std::min(workers, count);
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
        {
            body(i);
        }
        return;
    }
    std::exception_ptr failure;
    std::mutex failureMutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, begin, end] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                {
                    body(i);
                }
            }
            catch (...)
            {
                std::lock_guard lock(failureMutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : threads)
    {
        t.join();
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
}

} // namespace smartem
